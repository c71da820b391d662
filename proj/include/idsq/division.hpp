#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "idsq/bitvector.hpp"
#include "idsq/polynomial.hpp"
#include "idsq/skinny.hpp"

namespace idsq {

using DivisionVector = StateMask;

/// Antichain of minimal division vectors: the unknown-subset frontier.
/// A vector u is "unknown" iff it dominates some member.
class DivisionSet {
 public:
  DivisionSet() = default;
  /// Reduces an arbitrary list to its minimal elements.
  static DivisionSet minimal_of(std::vector<DivisionVector> vectors);

  const std::vector<DivisionVector>& vectors() const { return vectors_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  /// ∃ d in the set with u ⪰ d.
  bool covers(const DivisionVector& u) const;
  bool is_antichain() const;

  friend bool operator==(const DivisionSet&, const DivisionSet&) = default;

 private:
  std::vector<DivisionVector> vectors_;  // sorted, antichain
};

/// For each S-box input vector a, the minimal output vectors b such that
/// π_b(S(x)) contains a monomial π_u'(x) with u' ⪰ a.
struct SboxTrailTable {
  int cell_bits = 0;
  std::vector<std::vector<std::uint8_t>> minimal_outputs;

  /// Text dump: `a: b1 b2 …` per line, values in hex.
  std::string dump() const;
};

/// Builds the table from the S-box ANF (one polynomial per output bit over
/// variables x_0..x_{c−1}). Rejects non-bijective S-boxes.
SboxTrailTable build_sbox_table(const std::vector<Polynomial>& anf, int cell_bits);

/// Division trail u → v through x ↦ Mx: wt(u) = wt(v) and the submatrix
/// with rows v and columns u has determinant 1 over GF(2).
bool linear_trail_valid(const BinaryMatrix& m, const DivisionVector& u, const DivisionVector& v);

struct EngineOptions {
  std::size_t frontier_budget = std::size_t{1} << 24;
};

/// Forward two-subset bit-based division property propagation for SKINNY.
/// Frontiers are cached per (d0, rounds); all methods are thread safe.
class DivisionEngine {
 public:
  explicit DivisionEngine(const CipherParams& params, EngineOptions options = {});

  const CipherParams& params() const { return params_; }
  const SboxTrailTable& sbox_table() const { return sbox_; }

  /// One round SB, AC, AK, SR, MC. AC and AK leave the property unchanged.
  DivisionSet propagate_round(const DivisionSet& in, int round) const;

  /// D_p for input property d0; shared, cached.
  std::shared_ptr<const DivisionSet> frontier(const DivisionVector& d0, int rounds) const;

  /// True iff some p-round trail from d0 ends in d with d ⪯ u.
  bool reachable(const DivisionVector& d0, int rounds, const DivisionVector& u) const;

 private:
  void check_budget(std::size_t size) const;

  CipherParams params_;
  EngineOptions options_;
  SboxTrailTable sbox_;
  // Per-column, per-bit-position MixColumns transitions over 4-bit row vectors.
  std::array<std::vector<std::uint8_t>, 16> mc_outputs_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<DivisionVector, int>, std::shared_ptr<const DivisionSet>> cache_;
};

}  // namespace idsq
