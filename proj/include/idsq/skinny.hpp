#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idsq/bitvector.hpp"
#include "idsq/polynomial.hpp"

namespace idsq {

/// SKINNY-n-t configuration: cell size c ∈ {4, 8}, tweakey words z ∈ {1, 2, 3}.
class CipherParams {
 public:
  CipherParams(int cell_bits, int tweakey_words);

  /// Accepts names of the form `skinny-64-128`.
  static CipherParams parse(std::string_view name);

  int cell_bits() const { return cell_bits_; }
  int tweakey_words() const { return tweakey_words_; }
  int block_bits() const { return 16 * cell_bits_; }
  int tweakey_bits() const { return tweakey_words_ * block_bits(); }
  /// Number of round-tweakey bits added per round (first two rows).
  int round_key_bits() const { return 8 * cell_bits_; }
  /// Designers' round count for this variant.
  int full_rounds() const;
  std::string name() const;

  friend bool operator==(const CipherParams&, const CipherParams&) = default;

 private:
  int cell_bits_;
  int tweakey_words_;
};

/// 4x4 array of c-bit cells, row major. Bit j of the state is bit
/// (j mod c) of cell j / c, counted from the most significant end.
class State {
 public:
  using Cells = std::array<std::uint8_t, 16>;

  explicit State(int cell_bits, const Cells& cells = {});

  static State from_mask(int cell_bits, const StateMask& bits);
  static State from_hex(int cell_bits, std::string_view hex);

  int cell_bits() const { return cell_bits_; }
  const Cells& cells() const { return cells_; }
  std::uint8_t cell(int i) const { return cells_[static_cast<std::size_t>(i)]; }
  void set_cell(int i, unsigned value);

  bool bit(int j) const;
  StateMask to_mask() const;
  std::string to_hex() const;

  friend bool operator==(const State&, const State&) = default;

 private:
  int cell_bits_;
  Cells cells_{};
};

/// One XOR term of a round-tweakey bit: bit `bit` of master word `word`.
struct KeyTerm {
  int word;
  int bit;
  friend bool operator==(const KeyTerm&, const KeyTerm&) = default;
  friend auto operator<=>(const KeyTerm&, const KeyTerm&) = default;
};

inline constexpr int kMaxRounds = 64;

/// Master tweakey arrays TK1..TKz and the derived per-round tweakeys.
class TweakeySchedule {
 public:
  TweakeySchedule(const CipherParams& params, std::vector<State> words);
  /// Hex string of t = z·n bits; TK1 first.
  static TweakeySchedule from_hex(const CipherParams& params, std::string_view hex);

  const CipherParams& params() const { return params_; }
  const std::vector<State>& words() const { return words_; }

  /// Cells 0..7 of TK1 ⊕ … ⊕ TKz at round r (0-based absolute round).
  std::span<const std::uint8_t, 8> round_key(int round) const;
  /// Bit j ∈ [0, 8c) of the round tweakey at `round`, left-to-right.
  bool round_key_bit(int round, int j) const;
  /// Master bits whose XOR forms round-tweakey bit j at `round`.
  std::vector<KeyTerm> provenance(int round, int j) const;

  /// All master bits of word `word` as one vector (bit i = master bit i).
  StateMask master_bits(int word) const;

 private:
  CipherParams params_;
  std::vector<State> words_;
  std::vector<std::array<std::uint8_t, 8>> round_keys_;
};

/// Master-bit provenance of round-tweakey bit j at `round`, as a list of
/// XOR terms. For z = 1 this is always a single TK1 bit.
std::vector<KeyTerm> tweakey_provenance(const CipherParams& params, int round, int j);

/// States at the input of each round r_from..r_to−1 followed by the output.
using RoundStates = std::vector<State>;

RoundStates encrypt(const CipherParams& params, const TweakeySchedule& key, const State& pt,
                    int r_from, int r_to);
RoundStates decrypt(const CipherParams& params, const TweakeySchedule& key, const State& ct,
                    int r_from, int r_to);

/// In-place rounds on raw cells without bookkeeping; the hot path for
/// Monte-Carlo experiments. No validation.
void encrypt_cells(const TweakeySchedule& key, State::Cells& cells, int r_from, int r_to);

/// Substitution table for c-bit cells (c ∈ {4, 8}).
std::span<const std::uint8_t> sbox_table(int cell_bits);
std::span<const std::uint8_t> inverse_sbox_table(int cell_bits);

/// 6-bit round constant for absolute round r.
std::uint8_t round_constant(int round);

/// ANF of each S-box output bit over input variables x_0..x_{c−1}
/// (state-family variables, bit 0 = most significant).
std::vector<Polynomial> sbox_anf(int cell_bits);

/// Cell permutations. new[i] = old[kShiftRows[i]], TK'[i] = TK[kTweakeyPermutation[i]].
inline constexpr std::array<int, 16> kShiftRows = {0, 1, 2,  3,  7,  4,  5,  6,
                                                   10, 11, 8, 9, 13, 14, 15, 12};
inline constexpr std::array<int, 16> kTweakeyPermutation = {9, 15, 8, 13, 10, 14, 12, 11,
                                                            0, 1,  2, 3,  4,  5,  6,  7};
/// MixColumns cell matrix, row r gives the input rows XORed into output row r.
inline constexpr std::array<std::array<int, 4>, 4> kMixColumns = {
    {{1, 0, 1, 1}, {1, 0, 0, 0}, {0, 1, 1, 0}, {1, 0, 1, 0}}};

/// Square matrix over GF(2); row i is a bit vector over the columns.
struct BinaryMatrix {
  std::size_t size = 0;
  std::vector<StateMask> rows;

  bool at(std::size_t r, std::size_t c) const { return rows[r].test(c); }
  StateMask apply(const StateMask& x) const;
  bool invertible() const;
  BinaryMatrix inverse() const;
};

/// Bit-level n×n matrix of MixColumns on the whole state.
BinaryMatrix mc_matrix(const CipherParams& params);

}  // namespace idsq
