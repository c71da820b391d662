#include "idsq/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "idsq/parallel.hpp"

namespace idsq {
namespace {

using Reach = std::function<bool(const StateMask&)>;

SearchVerdict inconclusive(const std::exception& e) {
  SearchVerdict v;
  v.kind = VerdictKind::Inconclusive;
  v.note = e.what();
  return v;
}

SearchVerdict balanced_verdict() {
  SearchVerdict v;
  v.kind = VerdictKind::Balanced;
  v.probability = 1.0;
  return v;
}

// Shared tail of the key-dependent check. Only reachable pairs with u ≠ 0
// matter, and any pair dominating a reachable one in reduce_rule2's order
// is itself reachable, so reducing after filtering keeps exactly the
// reachable survivors of reducing the whole list.
SearchVerdict fold_key_dependent(const std::vector<Monomial>& terms, const Reach& reach) {
  std::vector<std::pair<StateMask, KeyMask>> live;
  for (const auto& m : terms)
    if (m.state.any() && reach(m.state)) live.emplace_back(m.state, m.key);
  live = reduce_rule2(std::move(live));

  KeyMask v;
  for (const auto& [u, key] : live) {
    if (key.none()) {
      SearchVerdict out;
      out.kind = VerdictKind::Unknown;
      out.witness = Monomial{u, key};
      return out;
    }
    v |= key;
  }
  if (v.none()) return balanced_verdict();
  SearchVerdict out;
  out.kind = VerdictKind::Probabilistic;
  v.for_each_set([&](std::size_t i) { out.key_bits.push_back(static_cast<int>(i)); });
  out.probability = key_dependent_formula(out.key_bits.size());
  out.estimated = true;
  return out;
}

void check_rounds(const CipherParams& params, int p, int q) {
  if (p < 0 || q < 1 || p + q > kMaxRounds)
    throw std::invalid_argument("invalid round split p=" + std::to_string(p) +
                                " q=" + std::to_string(q));
  (void)params;
}

}  // namespace

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Balanced: return "balanced";
    case VerdictKind::Unknown: return "unknown";
    case VerdictKind::Probabilistic: return "probabilistic";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

InputStructure::InputStructure(const CipherParams& params, StateMask active)
    : block_bits_(params.block_bits()), active_(active) {
  if (active_.none()) throw std::invalid_argument("input structure needs an active bit");
  if (active_.extent() > static_cast<std::size_t>(block_bits_))
    throw std::invalid_argument("active bits exceed the block size");
}

InputStructure InputStructure::from_cells(const CipherParams& params,
                                          const std::vector<int>& cells) {
  const int c = params.cell_bits();
  StateMask mask;
  for (int cell : cells) {
    if (cell < 0 || cell > 15) throw std::invalid_argument("cell index out of range");
    mask.set_field(static_cast<std::size_t>(cell * c), static_cast<std::size_t>(c),
                   (1U << c) - 1);
  }
  return InputStructure(params, mask);
}

InputStructure InputStructure::from_hex(const CipherParams& params, std::string_view hex) {
  return InputStructure(params, StateMask::from_hex(hex, static_cast<std::size_t>(params.block_bits())));
}

std::string InputStructure::to_hex() const {
  return active_.to_hex(static_cast<std::size_t>(block_bits_));
}

DistinguisherSearch::DistinguisherSearch(const CipherParams& params, SearchOptions options)
    : params_(params),
      options_(options),
      engine_(params, EngineOptions{options.frontier_budget}) {}

SearchVerdict DistinguisherSearch::check_balanced(const CiphertextCombination& c, int p, int q,
                                                  const InputStructure& input) const {
  check_rounds(params_, p, q);
  if (!(c.params() == params_)) throw std::invalid_argument("combination built for another cipher");
  try {
    const auto poly = backward_extend(c, p, q, options_.monomial_budget);
    std::vector<StateMask> exponents;
    exponents.reserve(poly.size());
    for (const auto& m : poly.terms()) exponents.push_back(m.state);
    for (const auto& u : reduce_rule1(std::move(exponents))) {
      if (u.none() || !engine_.reachable(input.d0(), p, u)) continue;
      SearchVerdict out;
      out.kind = VerdictKind::Unknown;
      for (const auto& m : poly.terms())
        if (m.state == u) {
          out.witness = m;
          break;
        }
      return out;
    }
    return balanced_verdict();
  } catch (const ResourceExhausted& e) {
    return inconclusive(e);
  }
}

SearchVerdict DistinguisherSearch::key_dependent_probability(const CiphertextCombination& c,
                                                             int p, int q,
                                                             const InputStructure& input) const {
  check_rounds(params_, p, q);
  if (key_variable_kind(params_) != KeyVariables::Master)
    throw std::invalid_argument("key-dependent analysis supports only z = 1");
  if (!(c.params() == params_)) throw std::invalid_argument("combination built for another cipher");
  try {
    const auto poly = backward_extend(c, p, q, options_.monomial_budget);
    return fold_key_dependent(poly.terms(), [&](const StateMask& u) {
      return engine_.reachable(input.d0(), p, u);
    });
  } catch (const ResourceExhausted& e) {
    return inconclusive(e);
  }
}

std::vector<SearchResult> DistinguisherSearch::enumerate_column_linear(
    int p, int q, const InputStructure& input) const {
  check_rounds(params_, p, q);
  const int c = params_.cell_bits();
  std::vector<CiphertextCombination> combos;
  for (int col = 0; col < 4; ++col)
    for (int t = 0; t < c; ++t)
      for (unsigned rows = 1; rows < 16; ++rows) {
        std::vector<int> bits;
        for (int r = 0; r < 4; ++r)
          if ((rows >> (3 - r)) & 1U) bits.push_back((4 * r + col) * c + t);
        combos.push_back(CiphertextCombination::linear(params_, bits));
      }
  // Warm the shared frontier once instead of racing on it.
  try {
    engine_.frontier(input.d0(), p);
  } catch (const ResourceExhausted&) {
  }
  std::vector<std::optional<SearchVerdict>> verdicts(combos.size());
  parallel_for(combos.size(), options_.jobs, [&](std::size_t i) {
    verdicts[i] = check_balanced(combos[i], p, q, input);
  });
  std::vector<SearchResult> out;
  out.reserve(combos.size());
  for (std::size_t i = 0; i < combos.size(); ++i) out.push_back({combos[i], *verdicts[i]});
  return out;
}

std::vector<SearchResult> DistinguisherSearch::enumerate_cell_nonlinear(
    int cell, int p, int q, const InputStructure& input) const {
  check_rounds(params_, p, q);
  if (params_.cell_bits() != 4)
    throw std::invalid_argument("nonlinear cell enumeration is only feasible for 4-bit cells");
  if (key_variable_kind(params_) != KeyVariables::Master)
    throw std::invalid_argument("key-dependent analysis supports only z = 1");
  if (cell < 0 || cell > 15) throw std::invalid_argument("cell index out of range");

  // Monomial m over the cell: bit (3 − t) of m selects b_{4·cell + t}.
  std::array<Monomial, 16> cell_monomials{};
  std::array<Polynomial, 16> extended;
  std::shared_ptr<const DivisionSet> frontier;
  try {
    for (unsigned m = 0; m < 16; ++m) {
      for (int t = 0; t < 4; ++t)
        if ((m >> (3 - t)) & 1U) cell_monomials[m].state.set(static_cast<std::size_t>(4 * cell + t));
      const CiphertextCombination single(params_, Polynomial::from_terms({cell_monomials[m]}));
      extended[m] = backward_extend(single, p, q, options_.monomial_budget);
    }
    frontier = engine_.frontier(input.d0(), p);
  } catch (const ResourceExhausted& e) {
    std::vector<SearchResult> out;
    for (unsigned f = 2; f < (1U << 16); ++f) {
      std::vector<Monomial> terms;
      for (unsigned m = 0; m < 16; ++m)
        if ((f >> m) & 1U) terms.push_back(cell_monomials[m]);
      out.push_back({CiphertextCombination(params_, Polynomial::from_terms(terms)), inconclusive(e)});
    }
    return out;
  }

  constexpr unsigned kFunctions = 1U << 16;
  std::vector<SearchVerdict> verdicts(kFunctions);
  // Gray-code walk in independent chunks; each chunk owns a reachability memo.
  const unsigned chunks = std::max(1U, std::min(options_.jobs * 4, 256U));
  const unsigned per_chunk = (kFunctions + chunks - 1) / chunks;
  parallel_for(chunks, options_.jobs, [&](std::size_t k) {
    const unsigned begin = static_cast<unsigned>(k) * per_chunk;
    const unsigned end = std::min(kFunctions, begin + per_chunk);
    if (begin >= end) return;
    std::unordered_map<StateMask, bool, BitVectorHash> memo;
    auto reach = [&](const StateMask& u) {
      auto [it, fresh] = memo.try_emplace(u, false);
      if (fresh) it->second = frontier->covers(u);
      return it->second;
    };
    unsigned gray = begin ^ (begin >> 1);
    Polynomial poly;
    for (unsigned m = 0; m < 16; ++m)
      if ((gray >> m) & 1U) poly ^= extended[m];
    for (unsigned g = begin; g < end; ++g) {
      if (g != begin) {
        const unsigned flip = static_cast<unsigned>(__builtin_ctz(g));
        gray ^= 1U << flip;
        poly ^= extended[flip];
      }
      verdicts[gray] = fold_key_dependent(poly.terms(), reach);
    }
  });

  std::vector<SearchResult> out;
  out.reserve(kFunctions - 2);
  for (unsigned f = 2; f < kFunctions; ++f) {
    std::vector<Monomial> terms;
    for (unsigned m = 0; m < 16; ++m)
      if ((f >> m) & 1U) terms.push_back(cell_monomials[m]);
    out.push_back({CiphertextCombination(params_, Polynomial::from_terms(std::move(terms))),
                   std::move(verdicts[f])});
  }
  return out;
}

double key_dependent_formula(std::size_t key_bit_count) {
  const double killed = std::ldexp(1.0, -static_cast<int>(key_bit_count));
  return killed + (1.0 - killed) * 0.5;
}

std::set<int> canonicalize_key_bits(const CipherParams& params,
                                    const std::vector<RoundKeyBit>& bits) {
  if (params.tweakey_words() != 1)
    throw std::invalid_argument("key-bit canonicalization supports only z = 1");
  std::set<int> out;
  for (const auto& b : bits) {
    if (b.round < 0 || b.round >= kMaxRounds || b.bit < 0 || b.bit >= params.round_key_bits())
      throw std::invalid_argument("round-key bit out of range");
    for (const auto& term : tweakey_provenance(params, b.round, b.bit)) out.insert(term.bit);
  }
  return out;
}

std::string report_header() {
  return "combination,rounds,p,q,active_mask,verdict,probability,key_bits";
}

std::string report_line(const CiphertextCombination& c, int p, int q,
                        const InputStructure& input, const SearchVerdict& verdict) {
  char prob[32];
  std::snprintf(prob, sizeof prob, "%.6g", verdict.probability);
  std::string keys;
  for (std::size_t i = 0; i < verdict.key_bits.size(); ++i) {
    if (i) keys += ' ';
    keys += "k" + std::to_string(verdict.key_bits[i]);
  }
  return c.to_string() + "," + std::to_string(p + q) + "," + std::to_string(p) + "," +
         std::to_string(q) + "," + input.to_hex() + "," + to_string(verdict.kind) + "," + prob +
         "," + keys;
}

}  // namespace idsq
