#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idsq/anf.hpp"
#include "idsq/division.hpp"

namespace idsq {

enum class VerdictKind { Balanced, Unknown, Probabilistic, Inconclusive };

std::string to_string(VerdictKind kind);

struct SearchVerdict {
  VerdictKind kind = VerdictKind::Unknown;
  double probability = 0.0;
  /// Master-key bits V (sorted) on which a probabilistic verdict depends.
  std::vector<int> key_bits;
  /// A reachable monomial that defeated the check, when there is one.
  std::optional<Monomial> witness;
  /// Probabilistic verdicts assume each surviving unknown term is balanced
  /// with probability exactly 1/2, so they are estimates.
  bool estimated = false;
  std::string note;
};

/// Plaintext structure: the active bits take all values, the rest are fixed.
class InputStructure {
 public:
  InputStructure(const CipherParams& params, StateMask active);
  static InputStructure from_cells(const CipherParams& params, const std::vector<int>& cells);
  static InputStructure from_hex(const CipherParams& params, std::string_view hex);

  const StateMask& active() const { return active_; }
  /// Input division property: the indicator vector of the active bits.
  const DivisionVector& d0() const { return active_; }
  std::size_t active_bits() const { return active_.weight(); }
  std::string to_hex() const;

 private:
  int block_bits_;
  StateMask active_;
};

struct SearchOptions {
  std::size_t monomial_budget = kDefaultMonomialBudget;
  std::size_t frontier_budget = std::size_t{1} << 24;
  unsigned jobs = 1;
};

struct SearchResult {
  CiphertextCombination combination;
  SearchVerdict verdict;
};

/// Meet-in-the-middle distinguisher search: the last q rounds are handled
/// symbolically by backward extension, the first p by division propagation.
class DistinguisherSearch {
 public:
  explicit DistinguisherSearch(const CipherParams& params, SearchOptions options = {});

  const CipherParams& params() const { return params_; }
  const DivisionEngine& engine() const { return engine_; }

  /// Key-independent check: balanced iff no maximal state exponent of the
  /// extended polynomial is reachable after p rounds.
  SearchVerdict check_balanced(const CiphertextCombination& c, int p, int q,
                               const InputStructure& input) const;

  /// Key-dependent check (z = 1 only). A reachable key-free monomial makes
  /// the verdict unknown; otherwise the key bits of reachable monomials form V.
  SearchVerdict key_dependent_probability(const CiphertextCombination& c, int p, int q,
                                          const InputStructure& input) const;

  /// XOR combinations of one intra-cell bit position across any nonempty
  /// subset of the rows of a column; ordered by column, position, subset.
  std::vector<SearchResult> enumerate_column_linear(int p, int q,
                                                    const InputStructure& input) const;

  /// Every non-constant Boolean function of one 4-bit cell, ordered by its
  /// 16-bit ANF coefficient word (bit m selects the monomial with mask m).
  std::vector<SearchResult> enumerate_cell_nonlinear(int cell, int p, int q,
                                                     const InputStructure& input) const;

 private:
  CipherParams params_;
  SearchOptions options_;
  DivisionEngine engine_;
};

/// Probability 2^-|V| + (1 − 2^-|V|)/2 for |V| key bits.
double key_dependent_formula(std::size_t key_bit_count);

struct RoundKeyBit {
  int round;
  int bit;
};

/// Master-key indices of round-tweakey bits. Only z = 1 is supported.
std::set<int> canonicalize_key_bits(const CipherParams& params,
                                    const std::vector<RoundKeyBit>& bits);

/// `combination,rounds,p,q,active_mask,verdict,probability,key_bits`
std::string report_header();
std::string report_line(const CiphertextCombination& c, int p, int q,
                        const InputStructure& input, const SearchVerdict& verdict);

}  // namespace idsq
