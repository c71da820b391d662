#include <doctest.h>

#include <set>

#include "idsq/lab.hpp"
#include "idsq/skinny.hpp"
#include "vectors.hpp"

using namespace idsq;

TEST_CASE("parameters") {
  const auto p = CipherParams::parse("skinny-64-192");
  CHECK(p.cell_bits() == 4);
  CHECK(p.tweakey_words() == 3);
  CHECK(p.block_bits() == 64);
  CHECK(p.tweakey_bits() == 192);
  CHECK(p.full_rounds() == 40);
  CHECK(p.name() == "skinny-64-192");
  CHECK(CipherParams(8, 1).full_rounds() == 40);
  CHECK(CipherParams(8, 3).full_rounds() == 56);
  CHECK_THROWS_AS(CipherParams(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(CipherParams(4, 4), std::invalid_argument);
  CHECK_THROWS_AS(CipherParams::parse("skinny-64-100"), std::invalid_argument);
}

TEST_CASE("state bit numbering is left to right") {
  const auto s = State::from_hex(4, "8000000000000001");
  CHECK(s.cell(0) == 8);
  CHECK(s.bit(0));
  CHECK(s.bit(63));
  CHECK_FALSE(s.bit(1));
  CHECK(State::from_mask(4, s.to_mask()) == s);
  CHECK_THROWS(State::from_hex(4, "00"));
}

TEST_CASE("published test vectors encrypt and decrypt") {
  for (const auto& v : test::kVectors) {
    CAPTURE(v.cipher);
    const auto params = CipherParams::parse(v.cipher);
    const auto key = TweakeySchedule::from_hex(params, v.key);
    const auto pt = State::from_hex(params.cell_bits(), v.plaintext);
    const auto enc = encrypt(params, key, pt, 0, params.full_rounds());
    CHECK(enc.size() == static_cast<std::size_t>(params.full_rounds() + 1));
    CHECK(enc.back().to_hex() == v.ciphertext);
    const auto dec = decrypt(params, key, enc.back(), 0, params.full_rounds());
    CHECK(dec.back() == pt);
  }
}

TEST_CASE("zero rounds is the identity and ranges are validated") {
  const CipherParams p(4, 1);
  const auto key = TweakeySchedule::from_hex(p, "0123456789abcdef");
  const auto pt = State::from_hex(4, "fedcba9876543210");
  const auto r = encrypt(p, key, pt, 3, 3);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == pt);
  CHECK_THROWS_AS(encrypt(p, key, pt, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(encrypt(CipherParams(8, 1), key, State(8), 0, 1), std::invalid_argument);

  const State zero(4);
  const auto one = encrypt(p, key, zero, 0, 1).back();
  CHECK(decrypt(p, key, one, 0, 1).back() == zero);
}

TEST_CASE("random round trips on every variant") {
  auto rng = seeded_rng(7, 0, 0);
  for (int c : {4, 8})
    for (int z = 1; z <= 3; ++z) {
      const CipherParams p(c, z);
      for (int i = 0; i < 1000 / 6 + 1; ++i) {
        const auto key = random_key(p, rng);
        const auto pt = random_state(p, rng);
        const int from = static_cast<int>(rng() % 10);
        const int to = from + static_cast<int>(rng() % 30);
        const auto ct = encrypt(p, key, pt, from, to).back();
        CHECK(decrypt(p, key, ct, from, to).back() == pt);
        auto cells = pt.cells();
        encrypt_cells(key, cells, from, to);
        CHECK(cells == ct.cells());
      }
    }
}

TEST_CASE("S-box ANF reproduces the table") {
  for (int c : {4, 8}) {
    const auto anf = sbox_anf(c);
    const auto table = sbox_table(c);
    const auto inv = inverse_sbox_table(c);
    REQUIRE(anf.size() == static_cast<std::size_t>(c));
    for (unsigned x = 0; x < (1U << c); ++x) {
      StateMask in;
      in.set_field(0, static_cast<std::size_t>(c), x);
      unsigned y = 0;
      for (const auto& f : anf) y = (y << 1) | (f.evaluate(in) ? 1U : 0U);
      CHECK(y == table[x]);
      CHECK(inv[table[x]] == x);
    }
  }
  CHECK_THROWS(sbox_anf(5));
}

TEST_CASE("round constants follow the 6-bit LFSR") {
  CHECK(round_constant(0) == 0x01);
  CHECK(round_constant(1) == 0x03);
  CHECK(round_constant(2) == 0x07);
  CHECK(round_constant(5) == 0x3e);
}

TEST_CASE("single-key provenance is a permutation of the master key") {
  for (int c : {4, 8}) {
    const CipherParams p(c, 1);
    for (int r = 0; r < 40; ++r) {
      std::set<int> seen;
      for (int j = 0; j < p.round_key_bits(); ++j) {
        const auto terms = tweakey_provenance(p, r, j);
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].word == 0);
        seen.insert(terms[0].bit);
        if (r == 0) CHECK(terms[0].bit == j);
      }
      CHECK(seen.size() == static_cast<std::size_t>(p.round_key_bits()));
    }
  }
}

TEST_CASE("provenance reproduces concrete round keys") {
  auto rng = seeded_rng(11, 0, 0);
  for (int c : {4, 8})
    for (int z = 1; z <= 3; ++z) {
      const CipherParams p(c, z);
      const auto key = random_key(p, rng);
      std::vector<StateMask> masters;
      for (int w = 0; w < z; ++w) masters.push_back(key.master_bits(w));
      for (int r : {0, 1, 5, 17, 30})
        for (int j = 0; j < p.round_key_bits(); ++j) {
          bool bit = false;
          for (const auto& t : key.provenance(r, j))
            bit ^= masters[static_cast<std::size_t>(t.word)].test(static_cast<std::size_t>(t.bit));
          CHECK(bit == key.round_key_bit(r, j));
        }
    }
}

TEST_CASE("bit-level MixColumns matrix matches the cell transform") {
  const CipherParams p(4, 1);
  const auto m = mc_matrix(p);
  CHECK(m.invertible());
  const auto inv = m.inverse();
  auto rng = seeded_rng(3, 0, 0);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(p, rng);
    State::Cells out{};
    for (int col = 0; col < 4; ++col)
      for (int r = 0; r < 4; ++r) {
        unsigned v = 0;
        for (int k = 0; k < 4; ++k)
          if (kMixColumns[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)])
            v ^= s.cell(4 * k + col);
        out[static_cast<std::size_t>(4 * r + col)] = static_cast<std::uint8_t>(v);
      }
    CHECK(m.apply(s.to_mask()) == State(4, out).to_mask());
    CHECK(inv.apply(m.apply(s.to_mask())) == s.to_mask());
  }
}
