#include "idsq/polynomial.hpp"

#include <algorithm>
#include <cctype>

namespace idsq {
namespace {

// Sorts and removes monomials that occur an even number of times.
void canonicalize(std::vector<Monomial>& terms) {
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) & 1U) terms[out++] = terms[i];
    i = j;
  }
  terms.resize(out);
}

std::vector<std::size_t> variable_list(const Monomial& m) {
  std::vector<std::size_t> vars;
  m.state.for_each_set([&](std::size_t i) { vars.push_back(i); });
  m.key.for_each_set([&](std::size_t i) { vars.push_back(StateMask::kBits + i); });
  return vars;
}

}  // namespace

bool display_before(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da > db;
  return variable_list(a) < variable_list(b);
}

Polynomial Polynomial::state_var(std::size_t i) {
  if (i >= StateMask::kBits) throw std::out_of_range("state variable index out of range");
  return Polynomial(std::vector<Monomial>{Monomial{StateMask::unit(i), {}}});
}

Polynomial Polynomial::key_var(std::size_t i) {
  if (i >= KeyMask::kBits) throw std::out_of_range("key variable index out of range");
  return Polynomial(std::vector<Monomial>{Monomial{{}, KeyMask::unit(i)}});
}

Polynomial Polynomial::from_terms(std::vector<Monomial> terms) {
  canonicalize(terms);
  return Polynomial(std::move(terms));
}

std::size_t Polynomial::degree() const {
  std::size_t d = 0;
  for (const auto& m : terms_) d = std::max(d, m.degree());
  return d;
}

bool Polynomial::contains(const Monomial& m) const {
  return std::binary_search(terms_.begin(), terms_.end(), m);
}

bool Polynomial::evaluate(const StateMask& s, const KeyMask& k) const {
  bool acc = false;
  for (const auto& m : terms_) acc ^= m.evaluate(s, k);
  return acc;
}

StateMask Polynomial::state_support() const {
  StateMask s;
  for (const auto& m : terms_) s |= m.state;
  return s;
}

KeyMask Polynomial::key_support() const {
  KeyMask k;
  for (const auto& m : terms_) k |= m.key;
  return k;
}

Polynomial& Polynomial::operator^=(const Polynomial& other) {
  std::vector<Monomial> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::set_symmetric_difference(terms_.begin(), terms_.end(), other.terms_.begin(),
                                other.terms_.end(), std::back_inserter(merged));
  terms_ = std::move(merged);
  return *this;
}

Polynomial poly_xor(const Polynomial& p, const Polynomial& q) { return p ^ q; }

Polynomial poly_mul(const Polynomial& p, const Polynomial& q, std::size_t budget) {
  if (p.is_zero() || q.is_zero()) return {};
  const std::size_t raw = p.size() * q.size();
  if (raw / q.size() != p.size() || raw > 4 * budget)
    throw ResourceExhausted("polynomial product exceeds the monomial budget");
  std::vector<Monomial> terms;
  terms.reserve(raw);
  for (const auto& a : p.terms())
    for (const auto& b : q.terms()) terms.push_back(a * b);
  auto result = Polynomial::from_terms(std::move(terms));
  if (result.size() > budget)
    throw ResourceExhausted("polynomial product exceeds the monomial budget");
  return result;
}

Polynomial substitute(const Polynomial& p, const VariableMap& map, std::size_t budget) {
  std::vector<Monomial> acc;
  for (const auto& m : p.terms()) {
    Polynomial image = Polynomial::one();
    Monomial passthrough;
    m.state.for_each_set([&](std::size_t i) {
      if (i >= map.state.size() || !map.state[i])
        throw std::invalid_argument("substitute: unmapped state variable s" +
                                    std::to_string(i));
      image = poly_mul(image, *map.state[i], budget);
    });
    m.key.for_each_set([&](std::size_t i) {
      if (i < map.key.size() && map.key[i])
        image = poly_mul(image, *map.key[i], budget);
      else
        passthrough.key.set(i);
    });
    for (const auto& t : image.terms()) acc.push_back(t * passthrough);
    if (acc.size() > 4 * budget) {
      canonicalize(acc);
      if (acc.size() > budget)
        throw ResourceExhausted("substitution exceeds the monomial budget");
    }
  }
  auto result = Polynomial::from_terms(std::move(acc));
  if (result.size() > budget) throw ResourceExhausted("substitution exceeds the monomial budget");
  return result;
}

std::string to_string(const Polynomial& p, std::string_view state_prefix,
                      std::string_view key_prefix) {
  if (p.is_zero()) return "0";
  auto terms = p.terms();
  std::sort(terms.begin(), terms.end(), display_before);
  std::string out;
  for (const auto& m : terms) {
    if (!out.empty()) out += " + ";
    if (m.is_constant()) {
      out += "1";
      continue;
    }
    std::string factors;
    auto emit = [&](std::string_view prefix, std::size_t i) {
      if (!factors.empty()) factors += "*";
      factors += prefix;
      factors += std::to_string(i);
    };
    m.state.for_each_set([&](std::size_t i) { emit(state_prefix, i); });
    m.key.for_each_set([&](std::size_t i) { emit(key_prefix, i); });
    out += factors;
  }
  return out;
}

Polynomial parse_polynomial(std::string_view text, std::string_view state_prefix,
                            std::string_view key_prefix) {
  std::string compact;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  if (compact.empty()) throw std::invalid_argument("empty polynomial");

  std::vector<Monomial> terms;
  std::string_view rest = compact;
  auto parse_index = [](std::string_view digits, std::string_view whole) {
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw std::invalid_argument("bad variable in '" + std::string(whole) + "'");
    return static_cast<std::size_t>(std::stoul(std::string(digits)));
  };
  while (true) {
    const auto end = rest.find_first_of("+^");
    const std::string_view term = rest.substr(0, end);
    if (term.empty()) throw std::invalid_argument("empty term in '" + compact + "'");
    Monomial m;
    bool zero = false;
    std::string_view factors = term;
    while (true) {
      const auto star = factors.find('*');
      const std::string_view f = factors.substr(0, star);
      if (f == "1") {
      } else if (f == "0") {
        zero = true;
      } else if (f.starts_with(state_prefix) &&
                 !(key_prefix.size() > state_prefix.size() && f.starts_with(key_prefix))) {
        const auto i = parse_index(f.substr(state_prefix.size()), f);
        if (i >= StateMask::kBits) throw std::invalid_argument("state index out of range");
        m.state.set(i);
      } else if (f.starts_with(key_prefix)) {
        const auto i = parse_index(f.substr(key_prefix.size()), f);
        if (i >= KeyMask::kBits) throw std::invalid_argument("key index out of range");
        m.key.set(i);
      } else {
        throw std::invalid_argument("unknown factor '" + std::string(f) + "'");
      }
      if (star == std::string_view::npos) break;
      factors.remove_prefix(star + 1);
    }
    if (!zero) terms.push_back(m);
    if (end == std::string_view::npos) break;
    rest.remove_prefix(end + 1);
  }
  return Polynomial::from_terms(std::move(terms));
}

}  // namespace idsq
