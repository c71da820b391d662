#include "idsq/skinny.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <stdexcept>

namespace idsq {
namespace {

// S-box tables, round-constant LFSR, tweakey permutation and TK2/TK3 LFSRs
// follow the SKINNY reference specification (Beierle et al., CRYPTO 2016).
constexpr std::array<std::uint8_t, 16> kSbox4 = {0xc, 0x6, 0x9, 0x0, 0x1, 0xa, 0x2, 0xb,
                                                 0x3, 0x8, 0x5, 0xd, 0x4, 0xe, 0x7, 0xf};

constexpr std::array<std::uint8_t, 256> kSbox8 = {
    0x65, 0x4c, 0x6a, 0x42, 0x4b, 0x63, 0x43, 0x6b, 0x55, 0x75, 0x5a, 0x7a, 0x53, 0x73, 0x5b,
    0x7b, 0x35, 0x8c, 0x3a, 0x81, 0x89, 0x33, 0x80, 0x3b, 0x95, 0x25, 0x98, 0x2a, 0x90, 0x23,
    0x99, 0x2b, 0xe5, 0xcc, 0xe8, 0xc1, 0xc9, 0xe0, 0xc0, 0xe9, 0xd5, 0xf5, 0xd8, 0xf8, 0xd0,
    0xf0, 0xd9, 0xf9, 0xa5, 0x1c, 0xa8, 0x12, 0x1b, 0xa0, 0x13, 0xa9, 0x05, 0xb5, 0x0a, 0xb8,
    0x03, 0xb0, 0x0b, 0xb9, 0x32, 0x88, 0x3c, 0x85, 0x8d, 0x34, 0x84, 0x3d, 0x91, 0x22, 0x9c,
    0x2c, 0x94, 0x24, 0x9d, 0x2d, 0x62, 0x4a, 0x6c, 0x45, 0x4d, 0x64, 0x44, 0x6d, 0x52, 0x72,
    0x5c, 0x7c, 0x54, 0x74, 0x5d, 0x7d, 0xa1, 0x1a, 0xac, 0x15, 0x1d, 0xa4, 0x14, 0xad, 0x02,
    0xb1, 0x0c, 0xbc, 0x04, 0xb4, 0x0d, 0xbd, 0xe1, 0xc8, 0xec, 0xc5, 0xcd, 0xe4, 0xc4, 0xed,
    0xd1, 0xf1, 0xdc, 0xfc, 0xd4, 0xf4, 0xdd, 0xfd, 0x36, 0x8e, 0x38, 0x82, 0x8b, 0x30, 0x83,
    0x39, 0x96, 0x26, 0x9a, 0x28, 0x93, 0x20, 0x9b, 0x29, 0x66, 0x4e, 0x68, 0x41, 0x49, 0x60,
    0x40, 0x69, 0x56, 0x76, 0x58, 0x78, 0x50, 0x70, 0x59, 0x79, 0xa6, 0x1e, 0xaa, 0x11, 0x19,
    0xa3, 0x10, 0xab, 0x06, 0xb6, 0x08, 0xba, 0x00, 0xb3, 0x09, 0xbb, 0xe6, 0xce, 0xea, 0xc2,
    0xcb, 0xe3, 0xc3, 0xeb, 0xd6, 0xf6, 0xda, 0xfa, 0xd3, 0xf3, 0xdb, 0xfb, 0x31, 0x8a, 0x3e,
    0x86, 0x8f, 0x37, 0x87, 0x3f, 0x92, 0x21, 0x9e, 0x2e, 0x97, 0x27, 0x9f, 0x2f, 0x61, 0x48,
    0x6e, 0x46, 0x4f, 0x67, 0x47, 0x6f, 0x51, 0x71, 0x5e, 0x7e, 0x57, 0x77, 0x5f, 0x7f, 0xa2,
    0x18, 0xae, 0x16, 0x1f, 0xa7, 0x17, 0xaf, 0x01, 0xb2, 0x0e, 0xbe, 0x07, 0xb7, 0x0f, 0xbf,
    0xe2, 0xca, 0xee, 0xc6, 0xcf, 0xe7, 0xc7, 0xef, 0xd2, 0xf2, 0xde, 0xfe, 0xd7, 0xf7, 0xdf,
    0xff};

template <std::size_t N>
constexpr std::array<std::uint8_t, N> invert(const std::array<std::uint8_t, N>& s) {
  std::array<std::uint8_t, N> inv{};
  for (std::size_t i = 0; i < N; ++i) inv[s[i]] = static_cast<std::uint8_t>(i);
  return inv;
}

constexpr auto kSbox4Inv = invert(kSbox4);
constexpr auto kSbox8Inv = invert(kSbox8);

constexpr std::array<std::uint8_t, kMaxRounds> make_round_constants() {
  std::array<std::uint8_t, kMaxRounds> rc{};
  unsigned x = 0;
  for (auto& r : rc) {
    x = ((x << 1) & 0x3f) | (((x >> 5) ^ (x >> 4) ^ 1U) & 1U);
    r = static_cast<std::uint8_t>(x);
  }
  return rc;
}

constexpr auto kRoundConstants = make_round_constants();

std::uint8_t lfsr_tk2(std::uint8_t x, int c) {
  if (c == 4) return static_cast<std::uint8_t>(((x << 1) & 0xe) | (((x >> 3) ^ (x >> 2)) & 1));
  return static_cast<std::uint8_t>(((x << 1) & 0xfe) | (((x >> 7) ^ (x >> 5)) & 1));
}

std::uint8_t lfsr_tk3(std::uint8_t x, int c) {
  if (c == 4) return static_cast<std::uint8_t>((x >> 1) | (((x ^ (x >> 3)) & 1) << 3));
  return static_cast<std::uint8_t>((x >> 1) | (((x ^ (x >> 6)) & 1) << 7));
}

void sub_cells(State::Cells& s, std::span<const std::uint8_t> sbox) {
  for (auto& x : s) x = sbox[x];
}

void add_constants(State::Cells& s, int round) {
  const auto rc = kRoundConstants[static_cast<std::size_t>(round)];
  s[0] ^= rc & 0xf;
  s[4] ^= (rc >> 4) & 0x3;
  s[8] ^= 0x2;
}

void add_round_key(State::Cells& s, std::span<const std::uint8_t, 8> rk) {
  for (std::size_t i = 0; i < 8; ++i) s[i] ^= rk[i];
}

void shift_rows(State::Cells& s) {
  const auto old = s;
  for (std::size_t i = 0; i < 16; ++i) s[i] = old[static_cast<std::size_t>(kShiftRows[i])];
}

void inv_shift_rows(State::Cells& s) {
  const auto old = s;
  for (std::size_t i = 0; i < 16; ++i) s[static_cast<std::size_t>(kShiftRows[i])] = old[i];
}

void mix_columns(State::Cells& s) {
  for (std::size_t j = 0; j < 4; ++j) {
    const auto a0 = s[j], a1 = s[4 + j], a2 = s[8 + j], a3 = s[12 + j];
    s[j] = a0 ^ a2 ^ a3;
    s[4 + j] = a0;
    s[8 + j] = a1 ^ a2;
    s[12 + j] = a0 ^ a2;
  }
}

void inv_mix_columns(State::Cells& s) {
  for (std::size_t j = 0; j < 4; ++j) {
    const auto n0 = s[j], n1 = s[4 + j], n2 = s[8 + j], n3 = s[12 + j];
    const std::uint8_t a0 = n1;
    const std::uint8_t a2 = n3 ^ a0;
    s[j] = a0;
    s[4 + j] = n2 ^ a2;
    s[8 + j] = a2;
    s[12 + j] = n0 ^ a0 ^ a2;
  }
}

void check_range(const CipherParams& params, const TweakeySchedule& key, int r_from, int r_to) {
  if (r_from < 0 || r_from > r_to || r_to > kMaxRounds)
    throw std::invalid_argument("invalid round range [" + std::to_string(r_from) + ", " +
                                std::to_string(r_to) + ")");
  if (!(key.params() == params))
    throw std::invalid_argument("tweakey schedule does not match cipher parameters");
}

// Per-variant table: for each round and round-tweakey bit, the master bits
// (word, bit) that are XORed into it. Built from unit master keys, which is
// exact because the tweakey schedule is linear.
using ProvenanceTable = std::vector<std::vector<std::vector<KeyTerm>>>;

ProvenanceTable build_provenance(const CipherParams& params) {
  const int n = params.block_bits();
  const int z = params.tweakey_words();
  ProvenanceTable table(kMaxRounds,
                        std::vector<std::vector<KeyTerm>>(static_cast<std::size_t>(
                            params.round_key_bits())));
  for (int w = 0; w < z; ++w) {
    for (int b = 0; b < n; ++b) {
      std::vector<State> words(static_cast<std::size_t>(z), State(params.cell_bits()));
      words[static_cast<std::size_t>(w)] = State::from_mask(params.cell_bits(), StateMask::unit(
                                                                                  static_cast<std::size_t>(b)));
      const TweakeySchedule unit(params, std::move(words));
      for (int r = 0; r < kMaxRounds; ++r)
        for (int j = 0; j < params.round_key_bits(); ++j)
          if (unit.round_key_bit(r, j))
            table[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)].push_back({w, b});
    }
  }
  return table;
}

}  // namespace

CipherParams::CipherParams(int cell_bits, int tweakey_words)
    : cell_bits_(cell_bits), tweakey_words_(tweakey_words) {
  if (cell_bits != 4 && cell_bits != 8)
    throw std::invalid_argument("cell size must be 4 or 8 bits");
  if (tweakey_words < 1 || tweakey_words > 3)
    throw std::invalid_argument("tweakey size must be 1, 2 or 3 blocks");
}

CipherParams CipherParams::parse(std::string_view name) {
  auto fail = [&] {
    return std::invalid_argument("unknown cipher '" + std::string(name) +
                                 "' (expected skinny-<n>-<t>)");
  };
  constexpr std::string_view prefix = "skinny-";
  if (!name.starts_with(prefix)) throw fail();
  name.remove_prefix(prefix.size());
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) throw fail();
  int n = 0, t = 0;
  const auto a = name.substr(0, dash), b = name.substr(dash + 1);
  if (std::from_chars(a.data(), a.data() + a.size(), n).ec != std::errc{} ||
      std::from_chars(b.data(), b.data() + b.size(), t).ec != std::errc{})
    throw fail();
  if ((n != 64 && n != 128) || t % n != 0) throw fail();
  return CipherParams(n / 16, t / n);
}

int CipherParams::full_rounds() const {
  static constexpr int kRounds64[] = {32, 36, 40};
  static constexpr int kRounds128[] = {40, 48, 56};
  return cell_bits_ == 4 ? kRounds64[tweakey_words_ - 1] : kRounds128[tweakey_words_ - 1];
}

std::string CipherParams::name() const {
  return "skinny-" + std::to_string(block_bits()) + "-" + std::to_string(tweakey_bits());
}

State::State(int cell_bits, const Cells& cells) : cell_bits_(cell_bits), cells_(cells) {
  if (cell_bits != 4 && cell_bits != 8)
    throw std::invalid_argument("cell size must be 4 or 8 bits");
  for (auto x : cells_)
    if (x >> cell_bits) throw std::invalid_argument("cell value exceeds cell size");
}

State State::from_mask(int cell_bits, const StateMask& bits) {
  State s(cell_bits);
  for (int i = 0; i < 16; ++i)
    s.cells_[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(bits.field(static_cast<std::size_t>(i * cell_bits),
                                             static_cast<unsigned>(cell_bits)));
  return s;
}

State State::from_hex(int cell_bits, std::string_view hex) {
  return from_mask(cell_bits,
                   StateMask::from_hex(hex, static_cast<std::size_t>(16 * cell_bits)));
}

void State::set_cell(int i, unsigned value) {
  if (i < 0 || i >= 16) throw std::out_of_range("cell index out of range");
  if (value >> cell_bits_) throw std::invalid_argument("cell value exceeds cell size");
  cells_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value);
}

bool State::bit(int j) const {
  const auto c = cell_bits_;
  return (cells_[static_cast<std::size_t>(j / c)] >> (c - 1 - j % c)) & 1U;
}

StateMask State::to_mask() const {
  StateMask m;
  for (int i = 0; i < 16; ++i)
    m.set_field(static_cast<std::size_t>(i * cell_bits_), static_cast<unsigned>(cell_bits_),
                cells_[static_cast<std::size_t>(i)]);
  return m;
}

std::string State::to_hex() const { return to_mask().to_hex(static_cast<std::size_t>(16 * cell_bits_)); }

TweakeySchedule::TweakeySchedule(const CipherParams& params, std::vector<State> words)
    : params_(params), words_(std::move(words)) {
  if (static_cast<int>(words_.size()) != params.tweakey_words())
    throw std::invalid_argument("expected " + std::to_string(params.tweakey_words()) +
                                " tweakey words");
  for (const auto& w : words_)
    if (w.cell_bits() != params.cell_bits())
      throw std::invalid_argument("tweakey cell size does not match cipher");

  const int c = params.cell_bits();
  std::vector<State::Cells> tk;
  for (const auto& w : words_) tk.push_back(w.cells());
  round_keys_.resize(kMaxRounds);
  for (int r = 0; r < kMaxRounds; ++r) {
    auto& rk = round_keys_[static_cast<std::size_t>(r)];
    rk.fill(0);
    for (const auto& word : tk)
      for (std::size_t i = 0; i < 8; ++i) rk[i] ^= word[i];
    for (std::size_t w = 0; w < tk.size(); ++w) {
      const auto old = tk[w];
      for (std::size_t i = 0; i < 16; ++i)
        tk[w][i] = old[static_cast<std::size_t>(kTweakeyPermutation[i])];
      if (w == 0) continue;
      for (std::size_t i = 0; i < 8; ++i)
        tk[w][i] = w == 1 ? lfsr_tk2(tk[w][i], c) : lfsr_tk3(tk[w][i], c);
    }
  }
}

TweakeySchedule TweakeySchedule::from_hex(const CipherParams& params, std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  const auto digits = static_cast<std::size_t>(params.block_bits() / 4);
  if (hex.size() != digits * static_cast<std::size_t>(params.tweakey_words()))
    throw std::invalid_argument("tweakey for " + params.name() + " needs " +
                                std::to_string(params.tweakey_bits() / 4) + " hex digits");
  std::vector<State> words;
  for (int w = 0; w < params.tweakey_words(); ++w)
    words.push_back(
        State::from_hex(params.cell_bits(), hex.substr(static_cast<std::size_t>(w) * digits, digits)));
  return TweakeySchedule(params, std::move(words));
}

std::span<const std::uint8_t, 8> TweakeySchedule::round_key(int round) const {
  if (round < 0 || round >= kMaxRounds) throw std::out_of_range("round out of range");
  return std::span<const std::uint8_t, 8>(round_keys_[static_cast<std::size_t>(round)]);
}

bool TweakeySchedule::round_key_bit(int round, int j) const {
  const int c = params_.cell_bits();
  if (j < 0 || j >= params_.round_key_bits()) throw std::out_of_range("round-key bit out of range");
  return (round_key(round)[static_cast<std::size_t>(j / c)] >> (c - 1 - j % c)) & 1U;
}

std::vector<KeyTerm> TweakeySchedule::provenance(int round, int j) const {
  return tweakey_provenance(params_, round, j);
}

StateMask TweakeySchedule::master_bits(int word) const {
  return words_.at(static_cast<std::size_t>(word)).to_mask();
}

std::vector<KeyTerm> tweakey_provenance(const CipherParams& params, int round, int j) {
  static std::once_flag once[2][3];
  static ProvenanceTable tables[2][3];
  const int ci = params.cell_bits() == 4 ? 0 : 1;
  const int zi = params.tweakey_words() - 1;
  std::call_once(once[ci][zi], [&] { tables[ci][zi] = build_provenance(params); });
  if (round < 0 || round >= kMaxRounds) throw std::out_of_range("round out of range");
  if (j < 0 || j >= params.round_key_bits()) throw std::out_of_range("round-key bit out of range");
  return tables[ci][zi][static_cast<std::size_t>(round)][static_cast<std::size_t>(j)];
}

void encrypt_cells(const TweakeySchedule& key, State::Cells& cells, int r_from, int r_to) {
  const auto sbox = sbox_table(key.params().cell_bits());
  for (int r = r_from; r < r_to; ++r) {
    sub_cells(cells, sbox);
    add_constants(cells, r);
    add_round_key(cells, key.round_key(r));
    shift_rows(cells);
    mix_columns(cells);
  }
}

RoundStates encrypt(const CipherParams& params, const TweakeySchedule& key, const State& pt,
                    int r_from, int r_to) {
  check_range(params, key, r_from, r_to);
  if (pt.cell_bits() != params.cell_bits())
    throw std::invalid_argument("state cell size does not match cipher");
  RoundStates out{pt};
  auto cells = pt.cells();
  for (int r = r_from; r < r_to; ++r) {
    encrypt_cells(key, cells, r, r + 1);
    out.emplace_back(params.cell_bits(), cells);
  }
  return out;
}

RoundStates decrypt(const CipherParams& params, const TweakeySchedule& key, const State& ct,
                    int r_from, int r_to) {
  check_range(params, key, r_from, r_to);
  if (ct.cell_bits() != params.cell_bits())
    throw std::invalid_argument("state cell size does not match cipher");
  const auto inv = inverse_sbox_table(params.cell_bits());
  RoundStates out{ct};
  auto cells = ct.cells();
  for (int r = r_to - 1; r >= r_from; --r) {
    inv_mix_columns(cells);
    inv_shift_rows(cells);
    add_round_key(cells, key.round_key(r));
    add_constants(cells, r);
    sub_cells(cells, inv);
    out.emplace_back(params.cell_bits(), cells);
  }
  return out;
}

std::span<const std::uint8_t> sbox_table(int cell_bits) {
  if (cell_bits == 4) return kSbox4;
  if (cell_bits == 8) return kSbox8;
  throw std::invalid_argument("unsupported cell size");
}

std::span<const std::uint8_t> inverse_sbox_table(int cell_bits) {
  if (cell_bits == 4) return kSbox4Inv;
  if (cell_bits == 8) return kSbox8Inv;
  throw std::invalid_argument("unsupported cell size");
}

std::uint8_t round_constant(int round) {
  if (round < 0 || round >= kMaxRounds) throw std::out_of_range("round out of range");
  return kRoundConstants[static_cast<std::size_t>(round)];
}

std::vector<Polynomial> sbox_anf(int cell_bits) {
  const auto table = sbox_table(cell_bits);
  const unsigned size = 1U << cell_bits;
  std::vector<Polynomial> out;
  for (int bit = 0; bit < cell_bits; ++bit) {
    // Truth table indexed by input value, then the binary Möbius transform.
    std::vector<std::uint8_t> coeff(size);
    for (unsigned x = 0; x < size; ++x) coeff[x] = (table[x] >> (cell_bits - 1 - bit)) & 1U;
    for (unsigned step = 1; step < size; step <<= 1)
      for (unsigned x = 0; x < size; ++x)
        if (x & step) coeff[x] ^= coeff[x ^ step];
    std::vector<Monomial> terms;
    for (unsigned u = 0; u < size; ++u) {
      if (!coeff[u]) continue;
      Monomial m;
      for (int i = 0; i < cell_bits; ++i)
        if ((u >> (cell_bits - 1 - i)) & 1U) m.state.set(static_cast<std::size_t>(i));
      terms.push_back(m);
    }
    out.push_back(Polynomial::from_terms(std::move(terms)));
  }
  return out;
}

StateMask BinaryMatrix::apply(const StateMask& x) const {
  StateMask y;
  for (std::size_t r = 0; r < size; ++r)
    if ((rows[r] & x).weight() & 1U) y.set(r);
  return y;
}

bool BinaryMatrix::invertible() const {
  auto m = rows;
  for (std::size_t col = 0, rank = 0; col < size; ++col) {
    std::size_t pivot = rank;
    while (pivot < size && !m[pivot].test(col)) ++pivot;
    if (pivot == size) return false;
    std::swap(m[rank], m[pivot]);
    for (std::size_t r = 0; r < size; ++r)
      if (r != rank && m[r].test(col)) m[r] ^= m[rank];
    ++rank;
  }
  return true;
}

BinaryMatrix BinaryMatrix::inverse() const {
  auto m = rows;
  BinaryMatrix inv{size, std::vector<StateMask>(size)};
  for (std::size_t i = 0; i < size; ++i) inv.rows[i].set(i);
  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    while (pivot < size && !m[pivot].test(col)) ++pivot;
    if (pivot == size) throw std::domain_error("matrix is singular");
    std::swap(m[col], m[pivot]);
    std::swap(inv.rows[col], inv.rows[pivot]);
    for (std::size_t r = 0; r < size; ++r)
      if (r != col && m[r].test(col)) {
        m[r] ^= m[col];
        inv.rows[r] ^= inv.rows[col];
      }
  }
  return inv;
}

BinaryMatrix mc_matrix(const CipherParams& params) {
  const auto c = static_cast<std::size_t>(params.cell_bits());
  const std::size_t n = 16 * c;
  BinaryMatrix m{n, std::vector<StateMask>(n)};
  for (std::size_t row = 0; row < 4; ++row)
    for (std::size_t col = 0; col < 4; ++col)
      for (std::size_t k = 0; k < 4; ++k) {
        if (!kMixColumns[row][k]) continue;
        for (std::size_t b = 0; b < c; ++b)
          m.rows[(4 * row + col) * c + b].set((4 * k + col) * c + b);
      }
  return m;
}

}  // namespace idsq
