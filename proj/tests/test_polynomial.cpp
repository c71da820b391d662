#include <doctest.h>

#include "idsq/polynomial.hpp"
#include "support.hpp"

using namespace idsq;
using idsq::test::random_polynomial;
using idsq::test::random_state_mask;
using idsq::test::random_key_mask;

TEST_CASE("xor cancels equal monomials") {
  const auto p = parse_polynomial("s1*s2 + s3 + 1");
  CHECK((p ^ p).is_zero());
  CHECK(poly_xor(p, Polynomial::one()) == parse_polynomial("s1*s2 + s3"));
  CHECK(Polynomial::from_terms({Monomial{}, Monomial{}}).is_zero());
}

TEST_CASE("multiplication is idempotent per variable") {
  const auto x = Polynomial::state_var(4);
  CHECK(poly_mul(x, x) == x);
  const auto a = parse_polynomial("s0 + 1");
  CHECK(poly_mul(a, a) == a);
  CHECK(poly_mul(a, parse_polynomial("s0")).is_zero());
}

TEST_CASE("printing and parsing round-trip in graded order") {
  const auto p = parse_polynomial("1 ^ k29 ^ s8*s9*k29 ^ s10");
  CHECK(to_string(p) == "s8*s9*k29 + s10 + k29 + 1");
  CHECK(parse_polynomial(to_string(p)) == p);
  CHECK(to_string(Polynomial{}) == "0");
  CHECK(to_string(parse_polynomial("b4 + b52", "b"), "b") == "b4 + b52");
  CHECK_THROWS_AS(parse_polynomial("s1 + "), std::invalid_argument);
  CHECK_THROWS_AS(parse_polynomial("x1"), std::invalid_argument);
}

TEST_CASE("products and substitution agree with pointwise evaluation") {
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_polynomial(8, 10, 6);
    const auto q = random_polynomial(8, 10, 6);
    const auto prod = poly_mul(p, q);
    const auto sum = p ^ q;

    VariableMap map;
    std::vector<Polynomial> images;
    for (int i = 0; i < 10; ++i) {
      images.push_back(random_polynomial(4, 12, 6, 2));
      map.state.emplace_back(images.back());
    }
    const auto sub = substitute(p, map);

    for (int point = 0; point < 20; ++point) {
      const auto s = random_state_mask(12);
      const auto k = random_key_mask(6);
      CHECK(prod.evaluate(s, k) == (p.evaluate(s, k) && q.evaluate(s, k)));
      CHECK(sum.evaluate(s, k) == (p.evaluate(s, k) != q.evaluate(s, k)));
      StateMask image;
      for (int i = 0; i < 10; ++i)
        if (images[static_cast<std::size_t>(i)].evaluate(s, k)) image.set(static_cast<std::size_t>(i));
      CHECK(sub.evaluate(s, k) == p.evaluate(image, k));
    }
  }
}

TEST_CASE("substitution rejects unmapped state variables and honours the budget") {
  VariableMap map;
  map.state.emplace_back(Polynomial::state_var(0));
  CHECK_THROWS_AS(substitute(parse_polynomial("s1"), map), std::invalid_argument);
  CHECK(substitute(parse_polynomial("s0*k3"), map) == parse_polynomial("s0*k3"));

  const auto wide = parse_polynomial("s0 + s1 + s2 + s3 + s4 + s5 + s6 + s7");
  const auto wide2 = parse_polynomial("s8 + s9 + s10 + s11 + s12 + s13 + s14 + s15");
  CHECK_THROWS_AS(poly_mul(wide, wide2, 10), ResourceExhausted);
}

TEST_CASE("supports and degree") {
  const auto p = parse_polynomial("s3*s5*k1 + s9 + k7");
  CHECK(p.degree() == 3);
  CHECK(p.state_support() == (StateMask::unit(3) | StateMask::unit(5) | StateMask::unit(9)));
  CHECK(p.key_support() == (KeyMask::unit(1) | KeyMask::unit(7)));
}

TEST_CASE("bit vectors: dominance, hex and fields") {
  auto v = StateMask::from_hex("f000000000000001", 64);
  CHECK(v.test(0));
  CHECK(v.test(3));
  CHECK(v.test(63));
  CHECK(v.weight() == 5);
  CHECK(v.to_hex(64) == "f000000000000001");
  CHECK(v.field(0, 4) == 0xf);
  CHECK(v.dominates(StateMask::unit(63)));
  CHECK_FALSE(StateMask::unit(63).dominates(v));
  StateMask w;
  w.set_field(60, 4, 0xa);
  CHECK(w.test(60));
  CHECK_FALSE(w.test(61));
  CHECK(w.to_hex(64) == "000000000000000a");
}
