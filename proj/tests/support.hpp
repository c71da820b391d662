#pragma once

#include <random>

#include "idsq/polynomial.hpp"

namespace idsq::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(0x5eed);
  return r;
}

// Random polynomial over state vars [0, s_vars) and key vars [0, k_vars).
inline Polynomial random_polynomial(std::size_t terms, std::size_t s_vars, std::size_t k_vars,
                                    std::size_t max_degree = 3) {
  std::vector<Monomial> out;
  for (std::size_t t = 0; t < terms; ++t) {
    Monomial m;
    const auto deg = rng()() % (max_degree + 1);
    for (std::size_t d = 0; d < deg; ++d) {
      const auto pick = rng()() % (s_vars + k_vars);
      if (pick < s_vars)
        m.state.set(pick);
      else
        m.key.set(pick - s_vars);
    }
    out.push_back(m);
  }
  return Polynomial::from_terms(out);
}

inline StateMask random_state_mask(std::size_t bits) {
  StateMask s;
  for (std::size_t i = 0; i < bits; ++i)
    if (rng()() & 1) s.set(i);
  return s;
}

inline KeyMask random_key_mask(std::size_t bits) {
  KeyMask k;
  for (std::size_t i = 0; i < bits; ++i)
    if (rng()() & 1) k.set(i);
  return k;
}

}  // namespace idsq::test
