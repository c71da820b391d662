#include "idsq/division.hpp"

#include <algorithm>
#include <stdexcept>

namespace idsq {
namespace {

bool gf2_determinant(std::vector<std::uint64_t> rows, std::size_t k) {
  for (std::size_t col = 0; col < k; ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    std::size_t pivot = col;
    while (pivot < k && !(rows[pivot] & bit)) ++pivot;
    if (pivot == k) return false;
    std::swap(rows[col], rows[pivot]);
    for (std::size_t r = col + 1; r < k; ++r)
      if (rows[r] & bit) rows[r] ^= rows[col];
  }
  return true;
}

}  // namespace

DivisionSet DivisionSet::minimal_of(std::vector<DivisionVector> vectors) {
  std::sort(vectors.begin(), vectors.end());
  vectors.erase(std::unique(vectors.begin(), vectors.end()), vectors.end());
  std::stable_sort(vectors.begin(), vectors.end(),
                   [](const DivisionVector& a, const DivisionVector& b) {
                     return a.weight() < b.weight();
                   });
  DivisionSet out;
  for (const auto& v : vectors) {
    bool dominated = false;
    for (const auto& k : out.vectors_)
      if (v.dominates(k)) {
        dominated = true;
        break;
      }
    if (!dominated) out.vectors_.push_back(v);
  }
  std::sort(out.vectors_.begin(), out.vectors_.end());
  return out;
}

bool DivisionSet::covers(const DivisionVector& u) const {
  return std::any_of(vectors_.begin(), vectors_.end(),
                     [&](const DivisionVector& d) { return u.dominates(d); });
}

bool DivisionSet::is_antichain() const {
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    for (std::size_t j = 0; j < vectors_.size(); ++j)
      if (i != j && vectors_[i].dominates(vectors_[j])) return false;
  return true;
}

std::string SboxTrailTable::dump() const {
  const auto digits = static_cast<std::size_t>((cell_bits + 3) / 4);
  auto hex = [&](unsigned v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s(digits, '0');
    for (std::size_t i = digits; i-- > 0; v >>= 4) s[i] = kDigits[v & 0xf];
    return s;
  };
  std::string out;
  for (std::size_t a = 0; a < minimal_outputs.size(); ++a) {
    out += hex(static_cast<unsigned>(a)) + ":";
    for (auto b : minimal_outputs[a]) out += " " + hex(b);
    out += "\n";
  }
  return out;
}

SboxTrailTable build_sbox_table(const std::vector<Polynomial>& anf, int cell_bits) {
  if (cell_bits < 1 || cell_bits > 8 || static_cast<int>(anf.size()) != cell_bits)
    throw std::invalid_argument("S-box ANF must have one polynomial per output bit (c <= 8)");
  const unsigned size = 1U << cell_bits;
  const auto c = static_cast<unsigned>(cell_bits);

  std::vector<unsigned> table(size);
  std::vector<bool> seen(size, false);
  for (unsigned x = 0; x < size; ++x) {
    StateMask in;
    in.set_field(0, c, x);
    unsigned y = 0;
    for (unsigned b = 0; b < c; ++b) y = (y << 1) | (anf[b].evaluate(in) ? 1U : 0U);
    if (seen[y]) throw std::invalid_argument("S-box is not bijective");
    seen[y] = true;
    table[x] = y;
  }

  // valid[b][a]: π_b(S(x)) contains some π_u'(x) with u' ⪰ a.
  std::vector<std::vector<std::uint8_t>> valid(size, std::vector<std::uint8_t>(size));
  for (unsigned b = 0; b < size; ++b) {
    auto& f = valid[b];
    for (unsigned x = 0; x < size; ++x) f[x] = (table[x] & b) == b;
    for (unsigned step = 1; step < size; step <<= 1)
      for (unsigned x = 0; x < size; ++x)
        if (x & step) f[x] ^= f[x ^ step];
    for (unsigned step = 1; step < size; step <<= 1)
      for (unsigned x = 0; x < size; ++x)
        if (!(x & step)) f[x] |= f[x | step];
  }

  SboxTrailTable out{cell_bits, std::vector<std::vector<std::uint8_t>>(size)};
  for (unsigned a = 0; a < size; ++a) {
    auto& mins = out.minimal_outputs[a];
    for (unsigned b = 0; b < size; ++b) {
      if (!valid[b][a]) continue;
      bool minimal = true;
      for (unsigned b2 = 0; b2 < size && minimal; ++b2)
        if (b2 != b && (b2 & b) == b2 && valid[b2][a]) minimal = false;
      if (minimal) mins.push_back(static_cast<std::uint8_t>(b));
    }
  }
  return out;
}

bool linear_trail_valid(const BinaryMatrix& m, const DivisionVector& u, const DivisionVector& v) {
  if (u.extent() > m.size || v.extent() > m.size)
    throw std::invalid_argument("division vector longer than the matrix dimension");
  const auto k = u.weight();
  if (k != v.weight()) return false;
  if (k == 0) return true;
  if (k > 64) throw std::invalid_argument("submatrix larger than 64x64");
  std::vector<std::size_t> cols;
  u.for_each_set([&](std::size_t i) { cols.push_back(i); });
  std::vector<std::uint64_t> rows;
  v.for_each_set([&](std::size_t r) {
    std::uint64_t row = 0;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (m.at(r, cols[j])) row |= std::uint64_t{1} << j;
    rows.push_back(row);
  });
  return gf2_determinant(std::move(rows), k);
}

DivisionEngine::DivisionEngine(const CipherParams& params, EngineOptions options)
    : params_(params),
      options_(options),
      sbox_(build_sbox_table(sbox_anf(params.cell_bits()), params.cell_bits())) {
  BinaryMatrix cell_matrix{4, std::vector<StateMask>(4)};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t k = 0; k < 4; ++k)
      if (kMixColumns[r][k]) cell_matrix.rows[r].set(k);
  for (unsigned a = 0; a < 16; ++a) {
    StateMask u;
    u.set_field(0, 4, a);
    for (unsigned b = 0; b < 16; ++b) {
      StateMask v;
      v.set_field(0, 4, b);
      if (linear_trail_valid(cell_matrix, u, v))
        mc_outputs_[a].push_back(static_cast<std::uint8_t>(b));
    }
  }
}

void DivisionEngine::check_budget(std::size_t size) const {
  if (size > options_.frontier_budget)
    throw ResourceExhausted("division frontier exceeds budget of " +
                            std::to_string(options_.frontier_budget) + " vectors");
}

// Both layers are products of small independent maps (one per cell, one per
// MixColumns slice) whose transitions are monotone: if a' ⪰ a, every output of
// a' dominates some output of a. Applying the factors one at a time and
// pruning in between therefore yields exactly the minimal set of the full
// product while keeping intermediate sets small.
DivisionSet DivisionEngine::propagate_round(const DivisionSet& in, int /*round*/) const {
  const auto c = static_cast<unsigned>(params_.cell_bits());
  std::vector<DivisionVector> current = in.vectors();
  std::vector<DivisionVector> next;

  // SubCells.
  for (unsigned i = 0; i < 16; ++i) {
    next.clear();
    for (const auto& d : current) {
      const unsigned a = d.field(i * c, c);
      if (a == 0) {
        next.push_back(d);
        continue;
      }
      for (auto b : sbox_.minimal_outputs[a]) {
        DivisionVector out = d;
        out.set_field(i * c, c, b);
        next.push_back(out);
      }
      check_budget(next.size());
    }
    current = DivisionSet::minimal_of(std::move(next)).vectors();
  }

  // AddConstants and AddRoundTweakey are identity transitions; ShiftRows
  // permutes cells.
  for (auto& d : current) {
    DivisionVector out;
    for (unsigned i = 0; i < 16; ++i)
      out.set_field(i * c, c, d.field(static_cast<unsigned>(kShiftRows[i]) * c, c));
    d = out;
  }

  // MixColumns, one (column, bit position) slice of four row bits at a time.
  for (unsigned col = 0; col < 4; ++col)
    for (unsigned t = 0; t < c; ++t) {
      next.clear();
      for (const auto& d : current) {
        unsigned a = 0;
        for (unsigned r = 0; r < 4; ++r) a = (a << 1) | (d.test((4 * r + col) * c + t) ? 1U : 0U);
        if (a == 0) {
          next.push_back(d);
          continue;
        }
        for (auto b : mc_outputs_[a]) {
          DivisionVector out = d;
          for (unsigned r = 0; r < 4; ++r) {
            const auto bit = (4 * r + col) * c + t;
            if ((b >> (3 - r)) & 1U)
              out.set(bit);
            else if (out.test(bit))
              out.flip(bit);
          }
          next.push_back(out);
        }
        check_budget(next.size());
      }
      current = DivisionSet::minimal_of(std::move(next)).vectors();
    }
  return DivisionSet::minimal_of(std::move(current));
}

std::shared_ptr<const DivisionSet> DivisionEngine::frontier(const DivisionVector& d0,
                                                            int rounds) const {
  if (rounds < 0) throw std::invalid_argument("negative round count");
  if (d0.extent() > static_cast<std::size_t>(params_.block_bits()))
    throw std::invalid_argument("input division vector longer than the block");
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find({d0, rounds}); it != cache_.end()) return it->second;
  }
  std::shared_ptr<const DivisionSet> result;
  if (rounds == 0) {
    result = std::make_shared<const DivisionSet>(DivisionSet::minimal_of({d0}));
  } else {
    const auto prev = frontier(d0, rounds - 1);
    result = std::make_shared<const DivisionSet>(propagate_round(*prev, rounds - 1));
  }
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(std::make_pair(d0, rounds), result).first->second;
}

bool DivisionEngine::reachable(const DivisionVector& d0, int rounds,
                               const DivisionVector& u) const {
  return frontier(d0, rounds)->covers(u);
}

}  // namespace idsq
