#include <doctest.h>

#include <algorithm>

#include "idsq/lab.hpp"
#include "idsq/search.hpp"

using namespace idsq;

namespace {

const CipherParams kP(4, 1);

const DistinguisherSearch& search() {
  static const DistinguisherSearch s(kP);
  return s;
}

CiphertextCombination comb(const char* text) { return CiphertextCombination::parse(kP, text); }

const SearchResult* find(const std::vector<SearchResult>& results, const char* text) {
  const auto target = comb(text).poly();
  for (const auto& r : results)
    if (r.combination.poly() == target) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("input structures") {
  const auto in = InputStructure::from_cells(kP, {15});
  CHECK(in.to_hex() == "000000000000000f");
  CHECK(in.active_bits() == 4);
  CHECK(InputStructure::from_hex(kP, "00000000000000f0").active_bits() == 4);
  CHECK_THROWS_AS(InputStructure(kP, StateMask{}), std::invalid_argument);
  CHECK_THROWS_AS(InputStructure(kP, StateMask::unit(64)), std::invalid_argument);
  CHECK_THROWS_AS(InputStructure::from_cells(kP, {16}), std::invalid_argument);
}

TEST_CASE("key-independent checks") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  auto v = search().check_balanced(comb("b4^b52"), 6, 1, in15);
  CHECK(v.kind == VerdictKind::Balanced);
  CHECK(v.probability == 1.0);
  CHECK(v.key_bits.empty());

  v = search().check_balanced(comb("b17"), 6, 2, in15);
  CHECK(v.kind == VerdictKind::Unknown);
  CHECK(v.probability == 0.0);
  REQUIRE(v.witness.has_value());
  CHECK(search().engine().reachable(in15.d0(), 6, v.witness->state));

  CHECK_THROWS_AS(search().check_balanced(comb("b4"), -1, 1, in15), std::invalid_argument);
  CHECK_THROWS_AS(search().check_balanced(comb("b4"), 3, 0, in15), std::invalid_argument);
}

TEST_CASE("two active cells, two backward rounds") {
  const auto in = InputStructure::from_cells(kP, {14, 15});
  CHECK(search().check_balanced(comb("b28^b44^b60"), 6, 2, in).kind == VerdictKind::Balanced);
}

TEST_CASE("key-dependent probabilities") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  auto v = search().key_dependent_probability(comb("b16^b32^b48"), 6, 2, in15);
  CHECK(v.kind == VerdictKind::Probabilistic);
  CHECK(v.probability == 0.625);
  CHECK(v.key_bits == std::vector<int>{16, 17});
  CHECK(v.estimated);

  v = search().key_dependent_probability(comb("b24^b25^b27^b24*b25"), 6, 1, in15);
  CHECK(v.probability == 0.625);
  CHECK(v.key_bits == std::vector<int>{28, 29});

  v = search().key_dependent_probability(comb("b4^b52"), 6, 1, in15);
  CHECK(v.kind == VerdictKind::Balanced);
  CHECK(v.probability == 1.0);

  v = search().key_dependent_probability(comb("b24^b26^b27^b24*b27"), 6, 1, in15);
  CHECK(v.kind == VerdictKind::Unknown);
  CHECK(v.probability == 0.0);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->key.none());

  CHECK(key_dependent_formula(0) == 1.0);
  CHECK(key_dependent_formula(1) == 0.75);
  CHECK(key_dependent_formula(2) == 0.625);

  const DistinguisherSearch wide(CipherParams(4, 2));
  CHECK_THROWS_AS(wide.key_dependent_probability(
                      CiphertextCombination::parse(CipherParams(4, 2), "b4"), 6, 1,
                      InputStructure::from_cells(CipherParams(4, 2), {15})),
                  std::invalid_argument);
}

TEST_CASE("reducing before or after the reachability filter gives the same verdict") {
  // Literal order: reduce all pairs, skip u = 0, then test reachability.
  const auto in15 = InputStructure::from_cells(kP, {15});
  const auto& engine = search().engine();
  const auto literal = [&](const CiphertextCombination& c, int p, int q) {
    const auto poly = backward_extend(c, p, q);
    std::vector<std::pair<StateMask, KeyMask>> pairs;
    for (const auto& m : poly.terms()) pairs.emplace_back(m.state, m.key);
    KeyMask v;
    for (const auto& [u, k] : reduce_rule2(pairs)) {
      if (u.none() || !engine.reachable(in15.d0(), p, u)) continue;
      if (k.none()) return -1.0;
      v |= k;
    }
    return key_dependent_formula(v.weight());
  };
  const auto results = search().enumerate_cell_nonlinear(6, 6, 1, in15);
  for (std::size_t i = 0; i < results.size(); i += 97) {
    const auto& r = results[i];
    const double expected = literal(r.combination, 6, 1);
    CHECK(r.verdict.probability == (expected < 0 ? 0.0 : expected));
  }
  for (const char* text : {"b16^b32^b48", "b17^b33^b49", "b0^b16"}) {
    const double expected = literal(comb(text), 6, 2);
    CHECK(search().key_dependent_probability(comb(text), 6, 2, in15).probability ==
          (expected < 0 ? 0.0 : expected));
  }
}

TEST_CASE("verdicts ignore monomial order and cancelled duplicates") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  const auto base = comb("b24^b25^b27^b24*b25");
  auto terms = base.poly().terms();
  std::reverse(terms.begin(), terms.end());
  Monomial extra;
  extra.state.set(26);
  terms.push_back(extra);
  terms.insert(terms.begin(), extra);
  const CiphertextCombination shuffled(kP, Polynomial::from_terms(terms));
  CHECK(shuffled.poly() == base.poly());
  const auto a = search().key_dependent_probability(base, 6, 1, in15);
  const auto b = search().key_dependent_probability(shuffled, 6, 1, in15);
  CHECK(a.probability == b.probability);
  CHECK(a.key_bits == b.key_bits);
}

TEST_CASE("column-linear enumeration at 7 rounds") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  const auto results = search().enumerate_column_linear(6, 1, in15);
  CHECK(results.size() == 4 * 4 * 15);
  for (const char* text : {"b4^b52", "b5^b53", "b6^b54", "b7^b55", "b24^b56", "b25^b57",
                           "b26^b58", "b27^b59"}) {
    CAPTURE(text);
    const auto* r = find(results, text);
    REQUIRE(r != nullptr);
    CHECK(r->verdict.kind == VerdictKind::Balanced);
  }
  // Balanced implies probability 1 on the key-dependent path.
  for (const auto& r : results)
    if (r.verdict.kind == VerdictKind::Balanced)
      CHECK(search().key_dependent_probability(r.combination, 6, 1, in15).probability == 1.0);

  DistinguisherSearch parallel(kP, SearchOptions{kDefaultMonomialBudget, std::size_t{1} << 24, 3});
  const auto again = parallel.enumerate_column_linear(6, 1, in15);
  REQUIRE(again.size() == results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(again[i].combination.poly() == results[i].combination.poly());
    CHECK(again[i].verdict.kind == results[i].verdict.kind);
  }
}

TEST_CASE("balanced linear combinations hold empirically at 7 and 8 rounds") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  for (int q : {1, 2}) {
    for (const auto& r : search().enumerate_column_linear(6, q, in15)) {
      if (r.verdict.kind != VerdictKind::Balanced) continue;
      CAPTURE(r.combination.to_string());
      const auto est = estimate_balance_probability(kP, in15.active(), 6 + q, r.combination, 1000,
                                                    17);
      CHECK(est.zero_parity == est.trials);
    }
  }
}

TEST_CASE("nonlinear enumeration of cell 6 at 7 rounds") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  const auto results = search().enumerate_cell_nonlinear(6, 6, 1, in15);
  CHECK(results.size() == 65534);
  for (const auto& r : results) CHECK_FALSE(r.combination.poly().is_zero());

  const auto* d1 = find(results, "b24^b26^b24*b27");
  REQUIRE(d1 != nullptr);
  CHECK(d1->verdict.probability == 0.625);
  CHECK(d1->verdict.key_bits == std::vector<int>{28, 31});
  const auto* d2 = find(results, "b24^b25^b27^b24*b25");
  REQUIRE(d2 != nullptr);
  CHECK(d2->verdict.probability == 0.625);
  CHECK(d2->verdict.key_bits == std::vector<int>{28, 29});
  CHECK(find(results, "b24^b26^b27^b24*b27")->verdict.probability == 0.0);
  CHECK(find(results, "b24^b26^b24*b27^b24*b25")->verdict.probability == 0.0);

  // Every probabilistic verdict becomes deterministic once V is zero.
  for (const auto& r : results) {
    if (r.verdict.kind != VerdictKind::Probabilistic) continue;
    CAPTURE(r.combination.to_string());
    const auto est = estimate_balance_probability(kP, in15.active(), 7, r.combination, 200, 23,
                                                  r.verdict.key_bits);
    CHECK(est.zero_parity == est.trials);
  }
  CHECK_THROWS_AS(DistinguisherSearch(CipherParams(8, 1))
                      .enumerate_cell_nonlinear(6, 6, 1, InputStructure::from_cells(CipherParams(8, 1), {15})),
                  std::invalid_argument);
}

TEST_CASE("an even multiset of one constant balances every combination") {
  // Every parity vanishes, so the division property is empty and stays empty.
  const auto& engine = search().engine();
  DivisionSet d;
  for (int r = 0; r < 3; ++r) d = engine.propagate_round(d, r);
  CHECK(d.empty());
  for (std::size_t b = 0; b < 64; b += 7) CHECK_FALSE(d.covers(StateMask::unit(b)));
  // A single text is the opposite case: {0} covers everything.
  CHECK(engine.reachable(StateMask{}, 1, StateMask::unit(0)));
}

TEST_CASE("key-bit canonicalization") {
  std::vector<RoundKeyBit> round0;
  for (int j = 0; j < 32; ++j) round0.push_back({0, j});
  const auto same = canonicalize_key_bits(kP, round0);
  CHECK(same.size() == 32);
  CHECK(*same.begin() == 0);
  CHECK(*same.rbegin() == 31);

  // Exposed cells alternate between master halves, so a round-r cell holds
  // the same master bits as round-(r+2) cells pulled back through PT twice.
  for (int j = 0; j < 32; ++j) {
    const auto cell = kTweakeyPermutation[static_cast<std::size_t>(
        kTweakeyPermutation[static_cast<std::size_t>(j / 4)])];
    REQUIRE(cell < 8);
    CHECK(canonicalize_key_bits(kP, {{2, j}}) == canonicalize_key_bits(kP, {{0, cell * 4 + j % 4}}));
    CHECK(canonicalize_key_bits(kP, {{2, j}, {0, cell * 4 + j % 4}}).size() == 1);
  }
  // Odd rounds expose the other half of the master key.
  for (const int bit : canonicalize_key_bits(kP, {{1, 0}, {1, 31}})) CHECK(bit >= 32);

  CHECK(canonicalize_key_bits(kP, {{6, 16}, {6, 17}}).size() == 2);
  CHECK_THROWS_AS(canonicalize_key_bits(CipherParams(4, 2), {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(canonicalize_key_bits(kP, {{0, 32}}), std::invalid_argument);
}

TEST_CASE("report lines") {
  const auto in15 = InputStructure::from_cells(kP, {15});
  const auto v = search().key_dependent_probability(comb("b16^b32^b48"), 6, 2, in15);
  CHECK(report_header() == "combination,rounds,p,q,active_mask,verdict,probability,key_bits");
  CHECK(report_line(comb("b16^b32^b48"), 6, 2, in15, v) ==
        "b16^b32^b48,8,6,2,000000000000000f,probabilistic,0.625,k16 k17");
}
