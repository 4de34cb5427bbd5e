#include "diffseq/multi_index.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <utility>

namespace diffseq {

namespace {

std::atomic<int> g_exponent_cap{32};

void check_exponent(int e) {
  if (e > g_exponent_cap.load(std::memory_order_relaxed)) {
    throw ExponentCapExceeded("exponent " + std::to_string(e) + " exceeds cap " +
                              std::to_string(g_exponent_cap.load()));
  }
}

}  // namespace

int exponent_cap() { return g_exponent_cap.load(std::memory_order_relaxed); }

void set_exponent_cap(int cap) {
  if (cap < 1 || cap > 255) throw std::invalid_argument("exponent cap must lie in [1, 255]");
  g_exponent_cap.store(cap, std::memory_order_relaxed);
}

MultiIndex::MultiIndex(int n) {
  if (n < 0 || n > kMaxVars) throw std::invalid_argument("unsupported variable count");
  n_ = static_cast<std::uint8_t>(n);
}

MultiIndex::MultiIndex(std::initializer_list<int> exps)
    : MultiIndex(from(std::span<const int>(exps.begin(), exps.size()))) {}

MultiIndex MultiIndex::from(std::span<const int> exps) {
  MultiIndex m(static_cast<int>(exps.size()));
  int deg = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw std::invalid_argument("negative exponent");
    check_exponent(exps[i]);
    m.e_[i] = static_cast<std::uint8_t>(exps[i]);
    deg += exps[i];
  }
  m.degree_ = static_cast<std::uint16_t>(deg);
  return m;
}

MultiIndex MultiIndex::unit(int n, int i) {
  MultiIndex m(n);
  m.e_[static_cast<std::size_t>(i)] = 1;
  m.degree_ = 1;
  return m;
}

std::vector<int> MultiIndex::exponents() const {
  std::vector<int> out(n_);
  for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = e_[static_cast<std::size_t>(i)];
  return out;
}

MultiIndex MultiIndex::operator*(const MultiIndex& other) const {
  if (other.n_ != n_) throw DimensionMismatch("monomial product of different variable counts");
  MultiIndex m(n_);
  for (int i = 0; i < n_; ++i) {
    const int e = e_[static_cast<std::size_t>(i)] + other.e_[static_cast<std::size_t>(i)];
    check_exponent(e);
    m.e_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
  }
  m.degree_ = static_cast<std::uint16_t>(degree_ + other.degree_);
  return m;
}

bool MultiIndex::divides(const MultiIndex& other) const {
  if (other.n_ != n_) throw DimensionMismatch("divisibility test of different variable counts");
  if (degree_ > other.degree_) return false;
  for (int i = 0; i < n_; ++i)
    if (e_[static_cast<std::size_t>(i)] > other.e_[static_cast<std::size_t>(i)]) return false;
  return true;
}

MultiIndex MultiIndex::quotient(const MultiIndex& divisor) const {
  if (!divisor.divides(*this)) throw std::invalid_argument("monomial does not divide");
  MultiIndex m(n_);
  for (int i = 0; i < n_; ++i)
    m.e_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
        e_[static_cast<std::size_t>(i)] - divisor.e_[static_cast<std::size_t>(i)]);
  m.degree_ = static_cast<std::uint16_t>(degree_ - divisor.degree_);
  return m;
}

MultiIndex MultiIndex::lcm(const MultiIndex& other) const {
  if (other.n_ != n_) throw DimensionMismatch("lcm of different variable counts");
  MultiIndex m(n_);
  int deg = 0;
  for (int i = 0; i < n_; ++i) {
    const auto e = std::max(e_[static_cast<std::size_t>(i)], other.e_[static_cast<std::size_t>(i)]);
    m.e_[static_cast<std::size_t>(i)] = e;
    deg += e;
  }
  m.degree_ = static_cast<std::uint16_t>(deg);
  return m;
}

MultiIndex MultiIndex::raised(int var, int by) const {
  MultiIndex m = *this;
  const int e = m.e_[static_cast<std::size_t>(var)] + by;
  check_exponent(e);
  m.e_[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
  m.degree_ = static_cast<std::uint16_t>(m.degree_ + by);
  return m;
}

MultiIndex MultiIndex::lowered(int var) const {
  if (e_[static_cast<std::size_t>(var)] == 0) throw std::invalid_argument("exponent already zero");
  MultiIndex m = *this;
  m.e_[static_cast<std::size_t>(var)] -= 1;
  m.degree_ -= 1;
  return m;
}

std::size_t MultiIndex::hash() const {
  std::size_t h = n_;
  for (int i = 0; i < n_; ++i) h = h * 131 + e_[static_cast<std::size_t>(i)];
  return h;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (int i = 0; i < n_; ++i) {
    if (i) s += ',';
    s += std::to_string(e_[static_cast<std::size_t>(i)]);
  }
  return s + ")";
}

std::strong_ordering compare_monomials(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DimensionMismatch("comparing monomials of different variable counts");
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (int i = a.size() - 1; i >= 0; --i) {
    if (a[i] != b[i]) return b[i] <=> a[i];  // smaller last exponent wins
  }
  return std::strong_ordering::equal;
}

const std::vector<MultiIndex>& monomials_of_degree(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({n, d});
  if (inserted) {
    std::vector<MultiIndex>& out = it->second;
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    // enumerate compositions of d into n parts
    auto rec = [&](auto&& self, int var, int left) -> void {
      if (var == n - 1) {
        e[static_cast<std::size_t>(var)] = left;
        out.push_back(MultiIndex::from(e));
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[static_cast<std::size_t>(var)] = k;
        self(self, var + 1, left - k);
      }
    };
    if (n == 0) {
      if (d == 0) out.push_back(MultiIndex(0));
    } else if (d >= 0) {
      rec(rec, 0, d);
    }
    std::sort(out.begin(), out.end(), MonomialGreater{});
  }
  return it->second;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::size_t count_monomials(int n, int d) {
  if (d < 0) return 0;
  if (n == 0) return d == 0 ? 1 : 0;
  return binomial(n + d - 1, d);
}

}  // namespace diffseq
