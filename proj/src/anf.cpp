#include "idsq/anf.hpp"

#include <algorithm>
#include <stdexcept>

namespace idsq {

CiphertextCombination::CiphertextCombination(const CipherParams& params, Polynomial poly)
    : params_(params), poly_(std::move(poly)) {
  const auto n = static_cast<std::size_t>(params.block_bits());
  if (poly_.key_support().any())
    throw std::invalid_argument("ciphertext combination may not contain key variables");
  const auto support = poly_.state_support();
  if (support.extent() > n)
    throw std::invalid_argument("ciphertext bit index exceeds the block size");
  if (!is_linear()) {
    const auto c = static_cast<std::size_t>(params.cell_bits());
    std::size_t cell = n;
    support.for_each_set([&](std::size_t j) {
      if (cell == n) cell = j / c;
      if (j / c != cell)
        throw std::invalid_argument("nonlinear combinations must stay within one ciphertext cell");
    });
  }
}

CiphertextCombination CiphertextCombination::parse(const CipherParams& params,
                                                   std::string_view text) {
  return CiphertextCombination(params, parse_polynomial(text, "b", "\x01"));
}

CiphertextCombination CiphertextCombination::linear(const CipherParams& params,
                                                    const std::vector<int>& bits) {
  Polynomial p;
  for (int b : bits) {
    if (b < 0) throw std::invalid_argument("negative ciphertext bit index");
    p ^= Polynomial::state_var(static_cast<std::size_t>(b));
  }
  return CiphertextCombination(params, std::move(p));
}

std::string CiphertextCombination::to_string() const {
  auto text = idsq::to_string(poly_, "b", "k");
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, " + ") == 0) {
      out += '^';
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

KeyVariables key_variable_kind(const CipherParams& params) {
  return params.tweakey_words() == 1 ? KeyVariables::Master : KeyVariables::RoundRelative;
}

std::vector<Polynomial> round_anf(const CipherParams& params, int round, int base_round) {
  const int c = params.cell_bits();
  const int n = params.block_bits();
  if (round < 0 || round >= kMaxRounds) throw std::out_of_range("round out of range");
  const auto kind = key_variable_kind(params);
  if (kind == KeyVariables::RoundRelative &&
      ((round - base_round) + 1) * params.round_key_bits() > static_cast<int>(KeyMask::kBits))
    throw ResourceExhausted("too many rounds of round-tweakey variables");

  const auto sbox = sbox_anf(c);
  const auto rc = round_constant(round);
  auto constant_cell = [&](int cell) -> unsigned {
    if (cell == 0) return rc & 0xfU;
    if (cell == 4) return (rc >> 4) & 0x3U;
    if (cell == 8) return 0x2U;
    return 0;
  };

  // z[i·c + b]: bit b of cell i after SB, AC and AK.
  std::vector<Polynomial> z(static_cast<std::size_t>(n));
  for (int cell = 0; cell < 16; ++cell) {
    for (int b = 0; b < c; ++b) {
      std::vector<Monomial> terms;
      for (const auto& m : sbox[static_cast<std::size_t>(b)].terms()) {
        Monomial shifted;
        m.state.for_each_set(
            [&](std::size_t t) { shifted.state.set(static_cast<std::size_t>(cell * c) + t); });
        terms.push_back(shifted);
      }
      Polynomial bit = Polynomial::from_terms(std::move(terms));
      if ((constant_cell(cell) >> (c - 1 - b)) & 1U) bit ^= Polynomial::one();
      if (cell < 8) {
        const int j = cell * c + b;
        if (kind == KeyVariables::Master) {
          const auto terms_of = tweakey_provenance(params, round, j);
          bit ^= Polynomial::key_var(static_cast<std::size_t>(terms_of.front().bit));
        } else {
          bit ^= Polynomial::key_var(
              static_cast<std::size_t>((round - base_round) * params.round_key_bits() + j));
        }
      }
      z[static_cast<std::size_t>(cell * c + b)] = std::move(bit);
    }
  }

  std::vector<Polynomial> out(static_cast<std::size_t>(n));
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col)
      for (int b = 0; b < c; ++b) {
        Polynomial acc;
        for (int k = 0; k < 4; ++k) {
          if (!kMixColumns[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)]) continue;
          const int src = kShiftRows[static_cast<std::size_t>(4 * k + col)];
          acc ^= z[static_cast<std::size_t>(src * c + b)];
        }
        out[static_cast<std::size_t>((4 * row + col) * c + b)] = std::move(acc);
      }
  return out;
}

Polynomial backward_extend(const CiphertextCombination& comb, int p, int q, std::size_t budget) {
  if (q < 1) throw std::invalid_argument("backward extension needs q >= 1");
  if (p < 0 || p + q > kMaxRounds) throw std::invalid_argument("round range out of bounds");
  const auto& params = comb.params();
  Polynomial poly = comb.poly();
  for (int r = p + q - 1; r >= p; --r) {
    VariableMap map;
    auto images = round_anf(params, r, p);
    map.state.reserve(images.size());
    for (auto& img : images) map.state.emplace_back(std::move(img));
    poly = substitute(poly, map, budget);
  }
  return poly;
}

KeyMask key_assignment(const TweakeySchedule& key, int p, int q) {
  const auto& params = key.params();
  KeyMask k;
  if (key_variable_kind(params) == KeyVariables::Master) {
    const auto master = key.master_bits(0);
    for (int i = 0; i < params.block_bits(); ++i)
      if (master.test(static_cast<std::size_t>(i))) k.set(static_cast<std::size_t>(i));
    return k;
  }
  if (q * params.round_key_bits() > static_cast<int>(KeyMask::kBits))
    throw std::invalid_argument("too many rounds of round-tweakey variables");
  for (int r = 0; r < q; ++r)
    for (int j = 0; j < params.round_key_bits(); ++j)
      if (key.round_key_bit(p + r, j))
        k.set(static_cast<std::size_t>(r * params.round_key_bits() + j));
  return k;
}

std::vector<StateMask> reduce_rule1(std::vector<StateMask> vectors) {
  std::sort(vectors.begin(), vectors.end());
  vectors.erase(std::unique(vectors.begin(), vectors.end()), vectors.end());
  std::stable_sort(vectors.begin(), vectors.end(), [](const StateMask& a, const StateMask& b) {
    return a.weight() > b.weight();
  });
  std::vector<StateMask> kept;
  for (const auto& v : vectors) {
    const bool dominated =
        std::any_of(kept.begin(), kept.end(), [&](const StateMask& k) { return k.dominates(v); });
    if (!dominated) kept.push_back(v);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<std::pair<StateMask, KeyMask>> reduce_rule2(
    std::vector<std::pair<StateMask, KeyMask>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::pair<StateMask, KeyMask>> kept;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    bool removed = false;
    for (std::size_t j = 0; j < pairs.size() && !removed; ++j)
      removed = j != i && pairs[j].first.dominates(pairs[i].first) &&
                pairs[i].second.dominates(pairs[j].second);
    if (!removed) kept.push_back(pairs[i]);
  }
  return kept;
}

}  // namespace idsq
