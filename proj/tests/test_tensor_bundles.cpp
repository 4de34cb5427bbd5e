#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "diffseq/bundle.hpp"
#include "support.hpp"

using namespace diffseq;

namespace {

std::vector<ConstantMetric> metrics(int n) { return {ConstantMetric::euclidean(n), ConstantMetric::minkowski(n)}; }

std::vector<Rational> matvec(const QMatrix& m, const std::vector<Rational>& v) {
  std::vector<Rational> out(m.size(), Rational(0));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  return out;
}

std::vector<Rational> random_vector(int dim) {
  std::vector<Rational> v;
  for (int i = 0; i < dim; ++i) v.emplace_back(testsupport::uniform(-9, 9));
  return v;
}

Rational component(const TensorSpace& s, const std::vector<Rational>& ambient, const std::vector<int>& idx) {
  const auto loc = s.locate(idx);
  if (!loc) return 0;
  return ambient[static_cast<std::size_t>(loc->first)] * loc->second;
}

// Symmetry constraints written on the full (T*)^4, brute-force nullity.
int riemann_dim_bruteforce(int n) {
  auto at = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
  const int N = n * n * n * n;
  std::vector<std::vector<Rational>> rows;
  auto add = [&](std::vector<std::pair<int, int>> terms) {
    std::vector<Rational> r(static_cast<std::size_t>(N), Rational(0));
    bool nz = false;
    for (auto [pos, c] : terms) r[static_cast<std::size_t>(pos)] += c;
    for (const auto& x : r) nz |= x != 0;
    if (nz) rows.push_back(std::move(r));
  };
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          add({{at(k, l, i, j), 1}, {at(l, k, i, j), 1}});
          add({{at(k, l, i, j), 1}, {at(k, l, j, i), 1}});
          add({{at(k, l, i, j), 1}, {at(i, j, k, l), -1}});
          add({{at(k, l, i, j), 1}, {at(k, i, j, l), 1}, {at(k, j, l, i), 1}});
        }
  return N - testsupport::dense_rank(std::move(rows));
}

}  // namespace

TEST_CASE("Riemann candidate dimensions") {
  CHECK(riemann_candidate_space(2)->dim() == 1);
  CHECK(riemann_candidate_space(4)->dim() == 20);
  CHECK(riemann_candidate_space(5)->dim() == 50);
  for (int n = 2; n <= 6; ++n) CHECK(riemann_candidate_space(n)->dim() == n * n * (n * n - 1) / 12);
  for (int n = 2; n <= 4; ++n) CHECK(riemann_candidate_space(n)->dim() == riemann_dim_bruteforce(n));
}

TEST_CASE("Riemann basis vectors satisfy every symmetry") {
  for (int n = 2; n <= 5; ++n) {
    const auto s = riemann_candidate_space(n);
    CHECK(s->dim() + s->constraint_rank() == s->ambient_dim());
    for (int t = 0; t < 5; ++t) {
      const auto amb = s->expand(random_vector(s->dim()));
      CHECK(s->satisfies_constraints(amb));
      CHECK(s->restrict_to_free(amb) == s->restrict_to_free(s->expand(s->restrict_to_free(amb))));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const Rational r = component(*s, amb, {k, l, i, j});
              CHECK(r == component(*s, amb, {i, j, k, l}));
              CHECK(r + component(*s, amb, {k, i, j, l}) + component(*s, amb, {k, j, l, i}) == 0);
            }
    }
  }
}

TEST_CASE("basis labels are distinct") {
  for (int n = 2; n <= 5; ++n) {
    const auto b = BundleBasis::of(riemann_candidate_space(n));
    std::set<std::string> seen(b.elements.begin(), b.elements.end());
    CHECK(seen.size() == b.elements.size());
  }
}

TEST_CASE("Weyl candidate dimensions") {
  for (const auto& g : metrics(4)) CHECK(weyl_candidate_space(4, g)->dim() == 10);
  for (const auto& g : metrics(3)) CHECK(weyl_candidate_space(3, g)->dim() == 0);
  for (const auto& g : metrics(5)) CHECK(weyl_candidate_space(5, g)->dim() == 35);
  for (int n = 3; n <= 6; ++n)
    for (const auto& g : metrics(n)) CHECK(weyl_candidate_space(n, g)->dim() == n * n * (n * n - 1) / 12 - n * (n + 1) / 2);
  CHECK_THROWS(weyl_candidate_space(2, ConstantMetric::euclidean(2)));
}

TEST_CASE("Lanczos constraint space") {
  const auto l4 = lanczos_constraint_space(4);
  CHECK(l4->ambient_dim() == 24);
  CHECK(l4->constraint_rank() == 4);
  CHECK(l4->dim() == 20);
  CHECK(lanczos_constraint_space(3)->dim() == 8);
  CHECK(lanczos_constraint_space(2)->dim() == 2);
  // antisymmetric in the first pair and cyclic-free
  for (int t = 0; t < 10; ++t) {
    const auto amb = l4->expand(random_vector(20));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          CHECK(component(*l4, amb, {i, j, k}) + component(*l4, amb, {j, i, k}) == 0);
          CHECK(component(*l4, amb, {i, j, k}) + component(*l4, amb, {j, k, i}) + component(*l4, amb, {k, i, j}) == 0);
        }
  }
}

TEST_CASE("Ricci and Weyl splitting") {
  for (int n = 3; n <= 5; ++n)
    for (const auto& g : metrics(n)) {
      CAPTURE(n);
      const auto sp = split_riemann(n, g);
      const int f1 = sp.riemann->dim(), rc = sp.ricci->dim(), w = sp.weyl->dim();
      CHECK(f1 == rc + w);
      CHECK(qmul(sp.project_ricci, sp.inject_ricci) == qidentity(rc));
      if (w > 0) {
        CHECK(qmul(sp.project_weyl, sp.inject_weyl) == qidentity(w));
        CHECK(qis_zero(qmul(sp.project_ricci, sp.inject_weyl)));
        CHECK(qis_zero(qmul(sp.project_weyl, sp.inject_ricci)));
        QMatrix sum = qmul(sp.inject_ricci, sp.project_ricci);
        const auto pw = qmul(sp.inject_weyl, sp.project_weyl);
        for (int r = 0; r < f1; ++r)
          for (int c = 0; c < f1; ++c) sum[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] += pw[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        CHECK(sum == qidentity(f1));
      } else {
        CHECK(qmul(sp.inject_ricci, sp.project_ricci) == qidentity(f1));
      }
    }
  const auto s4 = split_riemann(4, ConstantMetric::euclidean(4));
  CHECK(s4.riemann->dim() == 20);
  CHECK(s4.ricci->dim() == 10);
  CHECK(s4.weyl->dim() == 10);
  const auto cross = qmul(s4.project_ricci, s4.inject_weyl);
  CHECK(cross.size() == 10);
  CHECK(qis_zero(cross));
  const auto s3 = split_riemann(3, ConstantMetric::euclidean(3));
  CHECK(s3.riemann->dim() == 6);
  CHECK(s3.ricci->dim() == 6);
  CHECK(s3.weyl->dim() == 0);
}

TEST_CASE("Weyl projection is trace-free and matches the explicit formula") {
  for (int n = 3; n <= 5; ++n)
    for (const auto& g : metrics(n)) {
      const auto sp = split_riemann(n, g);
      const auto& F = *sp.riemann;
      for (int t = 0; t < 4; ++t) {
        const auto x = random_vector(F.dim());
        const auto R = F.expand(x);
        std::vector<Rational> wfree(static_cast<std::size_t>(F.dim()), Rational(0));
        if (sp.weyl->dim() > 0) wfree = matvec(sp.inject_weyl, matvec(sp.project_weyl, x));
        const auto W = F.expand(wfree);
        // Ric_{lj} = w^{ki} R_{kl,ij}, scal = w^{lj} Ric_{lj}
        std::vector<std::vector<Rational>> ric(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
        Rational scal = 0;
        for (int l = 0; l < n; ++l)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int i = 0; i < n; ++i) ric[l][j] += g.upper(k, i) * component(F, R, {k, l, i, j});
        for (int l = 0; l < n; ++l)
          for (int j = 0; j < n; ++j) scal += g.upper(l, j) * ric[l][j];
        bool match = true, tracefree = true;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                Rational expect = component(F, R, {k, l, i, j});
                expect -= (g.lower(k, i) * ric[l][j] - g.lower(l, i) * ric[k][j] - g.lower(k, j) * ric[l][i] + g.lower(l, j) * ric[k][i]) /
                          Rational(n - 2);
                expect += scal * (g.lower(k, i) * g.lower(l, j) - g.lower(l, i) * g.lower(k, j)) / Rational((n - 1) * (n - 2));
                match &= expect == component(F, W, {k, l, i, j});
              }
        for (int l = 0; l < n; ++l)
          for (int j = 0; j < n; ++j) {
            Rational tr = 0;
            for (int k = 0; k < n; ++k)
              for (int i = 0; i < n; ++i) tr += g.upper(k, i) * component(F, W, {k, l, i, j});
            tracefree &= tr == 0;
          }
        CAPTURE(n);
        CHECK(match);
        CHECK(tracefree);
        if (sp.weyl->dim() > 0) {
          const auto wamb = sp.weyl->expand(matvec(sp.project_weyl, x));
          CHECK(sp.weyl->satisfies_constraints(wamb));
          for (const auto& c : ricci_contraction(*sp.weyl, wamb, g)) CHECK(c == 0);
        }
      }
    }
}

TEST_CASE("Hodge star examples") {
  const auto g = ConstantMetric::euclidean(4);
  const auto star3 = hodge_star(4, 3, g);
  REQUIRE(star3.size() == 4);
  // dx2^dx3^dx4 is the last increasing triple; it goes to the first slot with sign +1
  CHECK(star3[0][3] == 1);
  for (std::size_t r = 1; r < 4; ++r) CHECK(star3[r][3] == 0);
  CHECK(qrank(star3) == 4);
}

TEST_CASE("double Hodge star is plus or minus the identity") {
  for (int n = 2; n <= 5; ++n)
    for (const auto& g : metrics(n))
      for (int k = 0; k <= n; ++k) {
        const auto twice = qmul(hodge_star(n, n - k, g), hodge_star(n, k, g));
        const auto id = qidentity(static_cast<int>(twice.size()));
        QMatrix neg = id;
        for (auto& row : neg)
          for (auto& v : row) v = -v;
        CAPTURE(n);
        CAPTURE(k);
        CHECK((twice == id || twice == neg));
      }
}

TEST_CASE("Hodge relabelling of the Bianchi target onto the Lanczos slots") {
  const int n = 4;
  for (const auto& g : metrics(n)) {
    const auto F2 = bianchi_target_space(n);
    CHECK(F2->ambient_dim() == 24);
    CHECK(F2->dim() == 20);
    auto mid = std::make_shared<TensorSpace>("Alt2xT*", n, std::vector<TensorFactor>{{FactorKind::Alt, 2}, {FactorKind::Full, 1}});
    mid->finalize();
    const auto h = hodge_relabel(*F2, 1, *mid, g);
    CHECK(qrank(h) == 24);
    const auto L = lanczos_constraint_space(n);
    const auto H = qmul(hodge_relabel(*mid, 0, *L, g), h);
    CHECK(qrank(H) == 24);
    // starring both factors sends the Bianchi target into the Lanczos constraints
    for (int t = 0; t < 5; ++t) CHECK(L->satisfies_constraints(matvec(H, F2->expand(random_vector(F2->dim())))));
    const auto dual = exterior_space(n, 3);
    CHECK(dual->ambient_dim() == 4);
    CHECK_THROWS(hodge_relabel(*mid, 1, *F2, g));
  }
}

TEST_CASE("exterior and symmetric bases") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(sym2_space(n)->dim() == n * (n + 1) / 2);
    for (int r = 0; r <= n; ++r) CHECK(exterior_space(n, r)->dim() == static_cast<int>(testsupport::binom(n, r)));
    CHECK(sym2_space(n)->tuple(1) == std::vector<int>{0, 1});
  }
  for (int n = 3; n <= 5; ++n)
    for (const auto& g : metrics(n)) CHECK(trace_free_sym2_space(n, g)->dim() == n * (n + 1) / 2 - 1);
  CHECK(permutation_sign({1, 0, 2}) == -1);
  CHECK(permutation_sign({1, 2, 0}) == 1);
  CHECK(permutation_sign({1, 1, 0}) == 0);
}
