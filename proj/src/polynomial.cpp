#include "diffseq/polynomial.hpp"

#include <algorithm>
#include <unordered_map>

namespace diffseq {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational '" + text + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool term_greater(const Term& a, const Term& b) {
  return compare_monomials(a.mono, b.mono) == std::strong_ordering::greater;
}

}  // namespace

RationalPoly RationalPoly::constant(int n, const Rational& c) {
  RationalPoly p(n);
  if (c != 0) p.terms_.push_back({MultiIndex(n), c});
  return p;
}

RationalPoly RationalPoly::variable(int n, int i, const Rational& c) {
  if (i < 0 || i >= n) throw std::out_of_range("variable index");
  RationalPoly p(n);
  if (c != 0) p.terms_.push_back({MultiIndex::unit(n, i), c});
  return p;
}

RationalPoly RationalPoly::monomial(const MultiIndex& m, const Rational& c) {
  RationalPoly p(m.size());
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

RationalPoly RationalPoly::from_terms(int n, std::vector<Term> terms) {
  RationalPoly p(n);
  for (const auto& t : terms)
    if (t.mono.size() != n) throw DimensionMismatch("term has wrong variable count");
  std::sort(terms.begin(), terms.end(), term_greater);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coef += t.coef;
      if (p.terms_.back().coef == 0) p.terms_.pop_back();
    } else if (t.coef != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

int RationalPoly::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

bool RationalPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = terms_.front().mono.degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const Term& t) { return t.mono.degree() == d; });
}

Rational RationalPoly::coefficient(const MultiIndex& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, const MultiIndex& key) {
    return compare_monomials(t.mono, key) == std::strong_ordering::greater;
  });
  if (it != terms_.end() && it->mono == m) return it->coef;
  return 0;
}

RationalPoly RationalPoly::operator-() const {
  RationalPoly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

void RationalPoly::add_scaled(const RationalPoly& other, const Rational& scale) {
  if (other.n_ != n_) throw DimensionMismatch("polynomial arithmetic with different variable counts");
  if (other.terms_.empty() || scale == 0) return;
  std::vector<Term> out;
  out.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end()) {
      out.push_back(std::move(*a++));
      continue;
    }
    if (a == terms_.end()) {
      out.push_back({b->mono, b->coef * scale});
      ++b;
      continue;
    }
    const auto cmp = compare_monomials(a->mono, b->mono);
    if (cmp == std::strong_ordering::greater) {
      out.push_back(std::move(*a++));
    } else if (cmp == std::strong_ordering::less) {
      out.push_back({b->mono, b->coef * scale});
      ++b;
    } else {
      Rational c = a->coef + b->coef * scale;
      if (c != 0) out.push_back({a->mono, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& other) {
  add_scaled(other, 1);
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& other) {
  add_scaled(other, -1);
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coef *= c;
  }
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.n_ != b.n_) throw DimensionMismatch("polynomial product of different variable counts");
  if (a.is_zero() || b.is_zero()) return RationalPoly(a.n_);
  if (b.terms_.size() == 1) return a.times_monomial(b.terms_[0].mono, b.terms_[0].coef);
  if (a.terms_.size() == 1) return b.times_monomial(a.terms_[0].mono, a.terms_[0].coef);
  std::unordered_map<MultiIndex, Rational, MultiIndexHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) acc[s.mono * t.mono] += s.coef * t.coef;
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) terms.push_back({m, std::move(c)});
  std::sort(terms.begin(), terms.end(), term_greater);
  RationalPoly p(a.n_);
  p.terms_ = std::move(terms);
  return p;
}

RationalPoly RationalPoly::times_monomial(const MultiIndex& m, const Rational& c) const {
  if (m.size() != n_) throw DimensionMismatch("monomial has wrong variable count");
  RationalPoly p(n_);
  if (c == 0) return p;
  p.terms_.reserve(terms_.size());
  // multiplication by a monomial preserves the order
  for (const auto& t : terms_) p.terms_.push_back({t.mono * m, t.coef * c});
  return p;
}

RationalPoly RationalPoly::negate_vars() const {
  RationalPoly p = *this;
  for (auto& t : p.terms_)
    if (t.mono.degree() % 2 == 1) t.coef = -t.coef;
  return p;
}

RationalPoly RationalPoly::derivative(const MultiIndex& mu) const {
  if (mu.size() != n_) throw DimensionMismatch("derivative multi-index has wrong variable count");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (!mu.divides(t.mono)) continue;
    Rational c = t.coef;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < mu[i]; ++k) c *= t.mono[i] - k;
    out.push_back({t.mono.quotient(mu), std::move(c)});
  }
  return from_terms(n_, std::move(out));
}

Rational RationalPoly::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != n_) throw DimensionMismatch("evaluation point has wrong size");
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational v = t.coef;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < t.mono[i]; ++k) v *= point[static_cast<std::size_t>(i)];
    sum += v;
  }
  return sum;
}

RationalPoly RationalPoly::exact_divide(const RationalPoly& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
  if (divisor.n_ != n_) throw DimensionMismatch("division with different variable counts");
  RationalPoly rem = *this;
  std::vector<Term> quot;
  const Term& lead = divisor.terms_.front();
  while (!rem.is_zero()) {
    const Term& t = rem.terms_.front();
    if (!lead.mono.divides(t.mono)) throw std::domain_error("polynomial division is not exact");
    Term q{t.mono.quotient(lead.mono), t.coef / lead.coef};
    rem.add_scaled(divisor.times_monomial(q.mono), -q.coef);
    quot.push_back(std::move(q));
  }
  return from_terms(n_, std::move(quot));
}

std::string RationalPoly::to_string(const char* var) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    if (!first) {
      s += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    } else if (c < 0) {
      s += "-";
      c = -c;
    }
    first = false;
    const bool unit = (c == 1);
    if (!unit || t.mono.degree() == 0) s += c.get_str();
    bool need_star = !unit || t.mono.degree() == 0;
    for (int i = 0; i < n_; ++i) {
      if (t.mono[i] == 0) continue;
      if (need_star) s += "*";
      s += var + std::to_string(i + 1);
      if (t.mono[i] > 1) s += "^" + std::to_string(t.mono[i]);
      need_star = true;
    }
  }
  return s;
}

RationalPoly poly_mul(const RationalPoly& p, const RationalPoly& q) { return p * q; }

RationalPoly negate_vars(const RationalPoly& p) { return p.negate_vars(); }

}  // namespace diffseq
