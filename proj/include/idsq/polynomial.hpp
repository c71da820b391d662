#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idsq/bitvector.hpp"

namespace idsq {

/// Raised when an expansion or search would exceed its configured budget.
/// Signals resource exhaustion, never a wrong answer.
class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMonomialBudget = std::size_t{1} << 22;

/// π_u(s)·π_v(k): a multilinear monomial over two variable families,
/// state bits (u) and key bits (v). The empty monomial is the constant 1.
struct Monomial {
  StateMask state;
  KeyMask key;

  bool is_constant() const { return state.none() && key.none(); }
  std::size_t degree() const { return state.weight() + key.weight(); }
  bool evaluate(const StateMask& s, const KeyMask& k) const {
    return s.dominates(state) && k.dominates(key);
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return {a.state | b.state, a.key | b.key};
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    return m.state.hash() * 31 + m.key.hash();
  }
};

/// Graded lexicographic order used for text output: higher degree first,
/// then by the ascending variable list (state variables before key
/// variables). The constant monomial sorts last.
bool display_before(const Monomial& a, const Monomial& b);

/// Boolean polynomial in algebraic normal form over GF(2).
///
/// Stored as a sorted, duplicate-free monomial list; insertion of an
/// existing monomial cancels it.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial one() { return Polynomial(std::vector<Monomial>{Monomial{}}); }
  static Polynomial state_var(std::size_t i);
  static Polynomial key_var(std::size_t i);
  /// Builds from an arbitrary list; pairs of equal monomials cancel.
  static Polynomial from_terms(std::vector<Monomial> terms);

  const std::vector<Monomial>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const;
  bool contains(const Monomial& m) const;
  bool evaluate(const StateMask& s, const KeyMask& k = {}) const;

  /// Union of all state (resp. key) variables that occur.
  StateMask state_support() const;
  KeyMask key_support() const;

  Polynomial& operator^=(const Polynomial& other);
  friend Polynomial operator^(Polynomial a, const Polynomial& b) { return a ^= b; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  explicit Polynomial(std::vector<Monomial> sorted) : terms_(std::move(sorted)) {}
  std::vector<Monomial> terms_;
};

/// p ⊕ q (symmetric difference of monomial sets).
Polynomial poly_xor(const Polynomial& p, const Polynomial& q);

/// p·q with x·x = x and GF(2) cancellation.
Polynomial poly_mul(const Polynomial& p, const Polynomial& q,
                    std::size_t budget = kDefaultMonomialBudget);

/// Images for substitution. A state variable without an entry is an error;
/// key variables pass through unchanged unless `key` supplies an entry.
struct VariableMap {
  std::vector<std::optional<Polynomial>> state;
  std::vector<std::optional<Polynomial>> key;
};

/// Homomorphic substitution of every variable of p by its image.
/// Throws std::invalid_argument on an unmapped state variable.
Polynomial substitute(const Polynomial& p, const VariableMap& map,
                      std::size_t budget = kDefaultMonomialBudget);

/// Renders as e.g. `s8*s9*k29 + s9*s10*k28 + 1`; the zero polynomial is `0`.
std::string to_string(const Polynomial& p, std::string_view state_prefix = "s",
                      std::string_view key_prefix = "k");

/// Parses the rendering above. Terms may be separated by `+` or `^`, factors
/// by `*`; `1` and `0` are constants. Whitespace is ignored.
Polynomial parse_polynomial(std::string_view text, std::string_view state_prefix = "s",
                            std::string_view key_prefix = "k");

}  // namespace idsq
