#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idsq/polynomial.hpp"
#include "idsq/skinny.hpp"

namespace idsq {

/// The output function g of an integral property, as a polynomial in the
/// ciphertext bits b_j. Nonlinear combinations must stay inside one cell.
class CiphertextCombination {
 public:
  CiphertextCombination(const CipherParams& params, Polynomial poly);

  /// Parses `b24^b26^b24*b27` (`^` or `+` for XOR, `*` for AND).
  static CiphertextCombination parse(const CipherParams& params, std::string_view text);
  /// XOR of the listed ciphertext bits.
  static CiphertextCombination linear(const CipherParams& params, const std::vector<int>& bits);

  const CipherParams& params() const { return params_; }
  const Polynomial& poly() const { return poly_; }
  bool is_linear() const { return poly_.degree() <= 1; }
  bool evaluate(const State& ciphertext) const { return poly_.evaluate(ciphertext.to_mask()); }

  /// Canonical `b4^b52` form (graded order, `*` inside terms).
  std::string to_string() const;

 private:
  CipherParams params_;
  Polynomial poly_;
};

/// Key variables of an extended polynomial. For z = 1 they are master-key
/// bits; otherwise they index round-tweakey bits relative to round p:
/// variable (r − p)·8c + j is bit j of the round tweakey of round r.
enum class KeyVariables { Master, RoundRelative };

KeyVariables key_variable_kind(const CipherParams& params);

/// ANF of round r's output bits in terms of its input state bits and the
/// round-tweakey variables of that round (numbered per key_variable_kind
/// with reference round `base_round`).
std::vector<Polynomial> round_anf(const CipherParams& params, int round, int base_round);

/// Expresses C(b), b the state after round p+q−1, as a polynomial in the
/// state s at the input of round p and in the tweakey variables of rounds
/// p..p+q−1. Throws ResourceExhausted past `budget` monomials.
Polynomial backward_extend(const CiphertextCombination& c, int p, int q,
                           std::size_t budget = kDefaultMonomialBudget);

/// Assignment of the key variables of backward_extend(…, p, q) for a concrete key.
KeyMask key_assignment(const TweakeySchedule& key, int p, int q);

/// Keeps the vectors not strictly dominated by another member (maximal under ⪰).
std::vector<StateMask> reduce_rule1(std::vector<StateMask> vectors);

/// Drops (u_i, v_i) whenever a distinct (u_j, v_j) has u_j ⪰ u_i and v_j ⪯ v_i.
std::vector<std::pair<StateMask, KeyMask>> reduce_rule2(
    std::vector<std::pair<StateMask, KeyMask>> pairs);

}  // namespace idsq
