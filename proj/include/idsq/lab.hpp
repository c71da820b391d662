#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "idsq/anf.hpp"
#include "idsq/skinny.hpp"

namespace idsq {

/// Deterministic 64-bit generator for (seed, stream, index): records and
/// trials each get their own, so parallel runs stay reproducible.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

State random_state(const CipherParams& params, std::mt19937_64& rng);
TweakeySchedule random_key(const CipherParams& params, std::mt19937_64& rng,
                           const std::vector<int>& zero_bits = {});

/// Plaintext multiset: active bits run over all 2^a values, the other bits
/// come from `constants` (drawn per instance when absent).
struct MultisetSpec {
  StateMask active;
  std::optional<State> constants;

  std::size_t active_bits() const { return active.weight(); }
  std::size_t size() const { return std::size_t{1} << active_bits(); }
};

/// The 2^a plaintexts of the structure with the given inactive-bit template.
/// Element i places the bits of i on the active positions, highest first.
std::vector<State::Cells> structure_plaintexts(const CipherParams& params,
                                               const StateMask& active, const State& constants);

/// XOR of g over the encryption (rounds 0..rounds−1) of the multiset.
bool evaluate_integral_property(const MultisetSpec& spec, const TweakeySchedule& key,
                                int rounds, const CiphertextCombination& g,
                                std::mt19937_64* rng = nullptr);

struct BalanceEstimate {
  std::size_t trials = 0;
  std::size_t zero_parity = 0;
  double frequency() const {
    return trials ? static_cast<double>(zero_parity) / static_cast<double>(trials) : 0.0;
  }
};

/// Fraction of random keys (with `zero_bits` of the concatenated master
/// tweakey forced to 0) whose parity is 0; fresh constants every trial.
BalanceEstimate estimate_balance_probability(const CipherParams& params, const StateMask& active,
                                             int rounds, const CiphertextCombination& g,
                                             std::size_t trials, std::uint64_t seed,
                                             const std::vector<int>& zero_bits = {},
                                             unsigned jobs = 1);

/// Division sequence of one cell: bit u is ⊕_x π_u(x) over the multiset,
/// u ascending from 0 to 2^c − 1.
std::vector<std::uint8_t> compute_ds(std::span<const std::uint8_t> cell_values, int cell_bits);

enum class URange { Full, Unit };

URange parse_urange(std::string_view text);
std::string to_string(URange r);

/// The u values used for each cell, ascending.
std::vector<unsigned> urange_values(URange r, int cell_bits);

/// Vectorial division sequence: cell-major concatenation of the DS entries
/// selected by `range` for each listed cell.
std::vector<std::uint8_t> compute_vds(const std::vector<State::Cells>& ciphertexts,
                                      int cell_bits, const std::vector<int>& cells, URange range);

struct DatasetSpec {
  CipherParams params{4, 1};
  int rounds = 7;
  StateMask active;
  URange urange = URange::Full;
  std::vector<int> cells;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

std::string dataset_header(const DatasetSpec& spec);

struct DatasetRecord {
  int label = 0;
  std::vector<std::uint8_t> features;
};

/// Record `index` of the dataset; labels follow an exactly balanced
/// seeded permutation.
DatasetRecord dataset_record(const DatasetSpec& spec, const std::vector<std::uint8_t>& labels,
                             std::size_t index);

std::vector<std::uint8_t> dataset_labels(std::size_t count, std::uint64_t seed);

/// Streams the header and `count` record lines. Throws on stream failure.
void generate_dataset(const DatasetSpec& spec, std::ostream& out, unsigned jobs = 1);

}  // namespace idsq
