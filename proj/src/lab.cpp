#include "idsq/lab.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "idsq/parallel.hpp"

namespace idsq {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kTrialStream = 1;
constexpr std::uint64_t kRecordStream = 2;
constexpr std::uint64_t kLabelStream = 3;

void clear_bit(State& s, int j) {
  const int c = s.cell_bits();
  const int cell = j / c;
  const unsigned mask = 1U << (c - 1 - j % c);
  s.set_cell(cell, s.cell(cell) & ~mask);
}

std::vector<int> active_positions(const StateMask& active) {
  std::vector<int> pos;
  active.for_each_set([&](std::size_t i) { pos.push_back(static_cast<int>(i)); });
  return pos;
}

void place_bits(State::Cells& cells, int c, const std::vector<int>& positions, std::uint64_t value) {
  const auto a = positions.size();
  for (std::size_t k = 0; k < a; ++k) {
    const int j = positions[k];
    const unsigned shift = static_cast<unsigned>(c - 1 - j % c);
    auto& cell = cells[static_cast<std::size_t>(j / c)];
    const unsigned bit = static_cast<unsigned>((value >> (a - 1 - k)) & 1U);
    cell = static_cast<std::uint8_t>((cell & ~(1U << shift)) | (bit << shift));
  }
}

bool combination_parity(const std::vector<State::Cells>& cts, int c,
                        const CiphertextCombination& g) {
  bool parity = false;
  for (const auto& ct : cts) parity ^= g.evaluate(State(c, ct));
  return parity;
}

void check_active(const CipherParams& params, const StateMask& active) {
  if (active.none()) throw std::invalid_argument("multiset needs at least one active bit");
  if (active.extent() > static_cast<std::size_t>(params.block_bits()))
    throw std::invalid_argument("active bits exceed the block size");
  if (active.weight() > 30) throw std::invalid_argument("too many active bits for direct encryption");
}

}  // namespace

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t x = seed;
  std::uint64_t s = splitmix64(x) ^ (stream * 0xd1b54a32d192ed03ULL);
  s = splitmix64(s) ^ index;
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(splitmix64(s))};
  return std::mt19937_64(seq);
}

State random_state(const CipherParams& params, std::mt19937_64& rng) {
  const int c = params.cell_bits();
  State s(c);
  for (int i = 0; i < 16; ++i) s.set_cell(i, static_cast<unsigned>(rng() & ((1U << c) - 1)));
  return s;
}

TweakeySchedule random_key(const CipherParams& params, std::mt19937_64& rng,
                           const std::vector<int>& zero_bits) {
  std::vector<State> words;
  for (int w = 0; w < params.tweakey_words(); ++w) words.push_back(random_state(params, rng));
  const int n = params.block_bits();
  for (int b : zero_bits) {
    if (b < 0 || b >= params.tweakey_bits()) throw std::invalid_argument("key bit out of range");
    clear_bit(words[static_cast<std::size_t>(b / n)], b % n);
  }
  return TweakeySchedule(params, std::move(words));
}

std::vector<State::Cells> structure_plaintexts(const CipherParams& params,
                                               const StateMask& active, const State& constants) {
  check_active(params, active);
  const auto pos = active_positions(active);
  std::vector<State::Cells> out(std::size_t{1} << pos.size(), constants.cells());
  for (std::size_t i = 0; i < out.size(); ++i) place_bits(out[i], params.cell_bits(), pos, i);
  return out;
}

bool evaluate_integral_property(const MultisetSpec& spec, const TweakeySchedule& key,
                                int rounds, const CiphertextCombination& g,
                                std::mt19937_64* rng) {
  const auto& params = key.params();
  if (!(g.params() == params)) throw std::invalid_argument("combination built for another cipher");
  State constants(params.cell_bits());
  if (spec.constants) {
    constants = *spec.constants;
  } else {
    if (!rng) throw std::invalid_argument("random constants need a generator");
    constants = random_state(params, *rng);
  }
  auto texts = structure_plaintexts(params, spec.active, constants);
  for (auto& t : texts) encrypt_cells(key, t, 0, rounds);
  return combination_parity(texts, params.cell_bits(), g);
}

BalanceEstimate estimate_balance_probability(const CipherParams& params, const StateMask& active,
                                             int rounds, const CiphertextCombination& g,
                                             std::size_t trials, std::uint64_t seed,
                                             const std::vector<int>& zero_bits, unsigned jobs) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  check_active(params, active);
  if (rounds < 0 || rounds > kMaxRounds) throw std::invalid_argument("round count out of range");
  const MultisetSpec spec{active, std::nullopt};
  const std::size_t chunks = std::min<std::size_t>(trials, 64);
  std::atomic<std::size_t> zeros{0};
  parallel_for(chunks, jobs, [&](std::size_t k) {
    std::size_t local = 0;
    for (std::size_t t = k; t < trials; t += chunks) {
      auto rng = seeded_rng(seed, kTrialStream, t);
      const auto key = random_key(params, rng, zero_bits);
      if (!evaluate_integral_property(spec, key, rounds, g, &rng)) ++local;
    }
    zeros += local;
  });
  return {trials, zeros.load()};
}

std::vector<std::uint8_t> compute_ds(std::span<const std::uint8_t> cell_values, int cell_bits) {
  if (cell_values.empty()) throw std::invalid_argument("division sequence of an empty multiset");
  if (cell_bits < 1 || cell_bits > 8) throw std::invalid_argument("cell width out of range");
  const unsigned size = 1U << cell_bits;
  std::vector<std::uint8_t> ds(size, 0);
  for (auto x : cell_values) {
    if (x >= size) throw std::invalid_argument("cell value wider than the cell");
    ds[x] ^= 1;
  }
  // ds[u] = ⊕_{x ⪰ u} count(x) mod 2.
  for (unsigned step = 1; step < size; step <<= 1)
    for (unsigned u = 0; u < size; ++u)
      if (!(u & step)) ds[u] ^= ds[u | step];
  return ds;
}

URange parse_urange(std::string_view text) {
  if (text == "full") return URange::Full;
  if (text == "unit") return URange::Unit;
  throw std::invalid_argument("u-range must be 'full' or 'unit'");
}

std::string to_string(URange r) { return r == URange::Full ? "full" : "unit"; }

std::vector<unsigned> urange_values(URange r, int cell_bits) {
  std::vector<unsigned> out;
  if (r == URange::Full) {
    for (unsigned u = 0; u < (1U << cell_bits); ++u) out.push_back(u);
  } else {
    for (int b = 0; b < cell_bits; ++b) out.push_back(1U << b);
  }
  return out;
}

std::vector<std::uint8_t> compute_vds(const std::vector<State::Cells>& ciphertexts,
                                      int cell_bits, const std::vector<int>& cells, URange range) {
  const auto us = urange_values(range, cell_bits);
  std::vector<std::uint8_t> out;
  out.reserve(cells.size() * us.size());
  std::vector<std::uint8_t> values(ciphertexts.size());
  for (int cell : cells) {
    if (cell < 0 || cell > 15) throw std::invalid_argument("cell index out of range");
    for (std::size_t i = 0; i < ciphertexts.size(); ++i)
      values[i] = ciphertexts[i][static_cast<std::size_t>(cell)];
    const auto ds = compute_ds(values, cell_bits);
    for (unsigned u : us) out.push_back(ds[u]);
  }
  return out;
}

std::string dataset_header(const DatasetSpec& spec) {
  std::string cells;
  for (std::size_t i = 0; i < spec.cells.size(); ++i) {
    if (i) cells += ',';
    cells += std::to_string(spec.cells[i]);
  }
  return "#idsq v=1 cipher=" + spec.params.name() + " rounds=" + std::to_string(spec.rounds) +
         " active=" + spec.active.to_hex(static_cast<std::size_t>(spec.params.block_bits())) +
         " urange=" + to_string(spec.urange) + " cells=" + cells;
}

std::vector<std::uint8_t> dataset_labels(std::size_t count, std::uint64_t seed) {
  std::vector<std::uint8_t> labels(count, 0);
  for (std::size_t i = 0; i < count / 2; ++i) labels[i] = 1;
  // Odd counts: the spare record's label comes from the seed.
  auto rng = seeded_rng(seed, kLabelStream, 0);
  if (count % 2) labels[count - 1] = static_cast<std::uint8_t>(rng() & 1U);
  for (std::size_t i = count; i > 1; --i) std::swap(labels[i - 1], labels[rng() % i]);
  return labels;
}

DatasetRecord dataset_record(const DatasetSpec& spec, const std::vector<std::uint8_t>& labels,
                             std::size_t index) {
  const auto& params = spec.params;
  const int c = params.cell_bits();
  auto rng = seeded_rng(spec.seed, kRecordStream, index);
  DatasetRecord rec;
  rec.label = labels.at(index);
  const auto key = random_key(params, rng);
  const auto constants = random_state(params, rng);
  auto texts = structure_plaintexts(params, spec.active, constants);
  if (rec.label == 0) {
    const auto pos = active_positions(spec.active);
    const std::uint64_t mask = (pos.size() >= 64) ? ~0ULL : ((1ULL << pos.size()) - 1);
    for (auto& t : texts) place_bits(t, c, pos, rng() & mask);
  }
  for (auto& t : texts) encrypt_cells(key, t, 0, spec.rounds);
  rec.features = compute_vds(texts, c, spec.cells, spec.urange);
  return rec;
}

void generate_dataset(const DatasetSpec& spec, std::ostream& out, unsigned jobs) {
  if (spec.count < 1) throw std::invalid_argument("dataset needs at least one record");
  if (spec.cells.empty()) throw std::invalid_argument("dataset needs at least one observed cell");
  if (spec.rounds < 0 || spec.rounds > kMaxRounds) throw std::invalid_argument("round count out of range");
  check_active(spec.params, spec.active);
  const auto labels = dataset_labels(spec.count, spec.seed);
  out << dataset_header(spec) << '\n';

  constexpr std::size_t kBlock = 4096;
  std::vector<std::string> lines;
  for (std::size_t base = 0; base < spec.count; base += kBlock) {
    const std::size_t n = std::min(kBlock, spec.count - base);
    lines.assign(n, {});
    parallel_for(n, jobs, [&](std::size_t i) {
      const auto rec = dataset_record(spec, labels, base + i);
      std::string line;
      line.reserve(rec.features.size() + 3);
      line += static_cast<char>('0' + rec.label);
      line += ',';
      for (auto b : rec.features) line += static_cast<char>('0' + b);
      lines[i] = std::move(line);
    });
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw std::runtime_error("failed writing dataset");
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing dataset");
}

}  // namespace idsq
