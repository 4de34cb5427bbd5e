#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diffseq/builders.hpp"
#include "support.hpp"

using namespace diffseq;
using testsupport::random_poly;
using testsupport::random_section;

namespace {

RationalPoly x(int n, int i, Rational c = 1) { return RationalPoly::variable(n, i, c); }

std::vector<OperatorMatrix> builtins(const ConstantMetric& (*metric)(int)) {
  std::vector<OperatorMatrix> v;
  for (int n = 2; n <= 4; ++n) {
    const auto& g = metric(n);
    v.push_back(killing(n, g));
    v.push_back(riemann_linearized(n, g));
    for (int r = 0; r < n; ++r) v.push_back(exterior_derivative(n, r));
    if (n >= 3) {
      v.push_back(conformal_killing(n, g));
      v.push_back(bianchi(n));
      v.push_back(ricci(n, g));
      v.push_back(einstein(n, g));
    }
  }
  v.push_back(lanczos_candidate(4));
  return v;
}

const ConstantMetric& euclid(int n) {
  static std::vector<ConstantMetric> cache;
  for (const auto& g : cache)
    if (g.n() == n) return g;
  cache.reserve(16);
  cache.push_back(ConstantMetric::euclidean(n));
  return cache.back();
}

const ConstantMetric& minkowski(int n) {
  static std::vector<ConstantMetric> cache;
  for (const auto& g : cache)
    if (g.n() == n) return g;
  cache.reserve(16);
  cache.push_back(ConstantMetric::minkowski(n));
  return cache.back();
}

OperatorMatrix random_operator(int n, int rows, int cols, int deg) {
  PolyMatrix e(static_cast<std::size_t>(rows), std::vector<RationalPoly>(static_cast<std::size_t>(cols), RationalPoly(n)));
  for (auto& r : e)
    for (auto& p : r) p = random_poly(n, deg, 3, -4, 4);
  return OperatorMatrix(n, BundleBasis::generic("V" + std::to_string(cols), cols), BundleBasis::generic("V" + std::to_string(rows), rows), e);
}

// Literal oracle: sum over entries of coefficient * d^mu applied to the section.
JetSection differentiate(const OperatorMatrix& D, const JetSection& s) {
  JetSection out;
  out.comps.assign(static_cast<std::size_t>(D.rows()), RationalPoly(D.n()));
  for (int a = 0; a < D.rows(); ++a)
    for (int k = 0; k < D.cols(); ++k)
      for (const auto& t : D.at(a, k).terms()) {
        RationalPoly v = s.comps[static_cast<std::size_t>(k)];
        for (int i = 0; i < D.n(); ++i)
          for (int r = 0; r < t.mono[i]; ++r) {
            RationalPoly dv(D.n());
            for (const auto& term : v.terms())
              if (term.mono[i] > 0)
                dv += RationalPoly::monomial(term.mono.lowered(i), term.coef * term.mono[i]);
            v = dv;
          }
        out.comps[static_cast<std::size_t>(a)] += v * t.coef;
      }
  return out;
}

}  // namespace

TEST_CASE("compose examples") {
  const auto g = ConstantMetric::euclidean(4);
  const auto cg = compose(exterior_derivative(3, 1), exterior_derivative(3, 0));
  CHECK(cg.rows() == 3);
  CHECK(cg.cols() == 1);
  CHECK(cg.is_zero());
  const auto br = compose(bianchi(4), riemann_linearized(4, g));
  CHECK(br.rows() == 20);
  CHECK(br.cols() == 10);
  CHECK(br.is_zero());
  const auto bl = compose(bianchi(4), lanczos_candidate(4));
  CHECK(bl.rows() == 20);
  CHECK(bl.cols() == 20);
  CHECK_FALSE(bl.is_zero());
  CHECK_THROWS_AS(compose(killing(3, ConstantMetric::euclidean(3)), killing(3, ConstantMetric::euclidean(3))), BasisMismatch);
}

TEST_CASE("compose order bound") {
  for (int t = 0; t < 30; ++t) {
    const auto A = random_operator(3, 2, 3, 2), B = random_operator(3, 3, 2, 3);
    CHECK(compose(A, B).order() <= A.order() + B.order());
  }
}

TEST_CASE("adjoint examples") {
  const auto ag = adjoint(exterior_derivative(3, 0));
  REQUIRE(ag.rows() == 1);
  REQUIRE(ag.cols() == 3);
  for (int i = 0; i < 3; ++i) CHECK(ag.at(0, i) == x(3, i, -1));
  const auto K = killing(2, ConstantMetric::euclidean(2));
  const auto aK = adjoint(K);
  CHECK(aK.rows() == 2);
  CHECK(aK.cols() == 3);
  // sigma_11, sigma_12, sigma_22 raw pairing: -(2 d1 s11 + d2 s12), -(d1 s12 + 2 d2 s22)
  CHECK(aK.at(0, 0) == x(2, 0, -2));
  CHECK(aK.at(0, 1) == x(2, 1, -1));
  CHECK(aK.at(0, 2).is_zero());
  CHECK(aK.at(1, 1) == x(2, 0, -1));
  CHECK(aK.at(1, 2) == x(2, 1, -2));
}

TEST_CASE("weighted Einstein operator is self-adjoint") {
  for (int n = 3; n <= 4; ++n)
    for (const auto& g : {ConstantMetric::euclidean(n), ConstantMetric::minkowski(n)}) {
      const auto PE = compose(sym2_pairing(n, g), einstein(n, g));
      CHECK(adjoint(PE).same_entries(PE));
      CHECK(PE.rows() == n * (n + 1) / 2);
    }
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
  for (int t = 0; t < 40; ++t) {
    const int n = testsupport::uniform(2, 4);
    const auto A = random_operator(n, 2, 3, 2), B = random_operator(n, 3, 2, 2);
    CHECK(adjoint(adjoint(A)) == A);
    CHECK(adjoint(compose(A, B)).same_entries(compose(adjoint(B), adjoint(A))));
  }
  for (const auto& D : builtins(euclid)) CHECK(adjoint(adjoint(D)) == D);
}

TEST_CASE("compatibility condition examples") {
  const auto g4 = ConstantMetric::euclidean(4);
  const auto c2 = compatibility_conditions(killing(2, ConstantMetric::euclidean(2)));
  CHECK(c2.rows() == 1);
  CHECK(c2.cols() == 3);
  CHECK(c2.order() == 2);
  const auto cR = compatibility_conditions(riemann_linearized(4, g4));
  CHECK(cR.rows() == 20);
  CHECK(cR.order() == 1);
  CHECK(module_equality(cR.row_presentation(), bianchi(4).row_presentation()));
  const auto weyl = compatibility_conditions(conformal_killing(4, g4));
  CHECK(weyl.rows() == 10);
  const auto cw = compatibility_conditions(weyl);
  CHECK(cw.rows() == 9);
  CHECK(cw.cols() == 10);
  CHECK(cw.order() == 2);
}

TEST_CASE("CC composes to zero for every built-in") {
  for (auto metric : {euclid, minkowski})
    for (const auto& D : builtins(metric)) {
      const auto cc = compatibility_conditions(D);
      if (cc.rows() > 0) CHECK(compose(cc, D).is_zero());
      CHECK(cc.cols() == D.rows());
    }
}

TEST_CASE("differential rank examples") {
  CHECK(differential_rank(killing(4, ConstantMetric::euclidean(4))) == 4);
  CHECK(differential_rank(riemann_linearized(2, ConstantMetric::euclidean(2))) == 1);
}

TEST_CASE("rank bookkeeping along exact chains") {
  for (auto metric : {euclid, minkowski})
    for (const auto& D : builtins(metric)) {
      if (D.name() == "lanczos") continue;
      const auto cc = compatibility_conditions(D);
      const int r1 = cc.rows() == 0 ? 0 : differential_rank(cc);
      CAPTURE(D.name());
      CHECK(r1 == D.rows() - differential_rank(D));
    }
}

TEST_CASE("apply examples") {
  JetSection s{{RationalPoly::monomial(MultiIndex{1, 1})}};
  const auto gs = apply(exterior_derivative(2, 0), s);
  CHECK(gs.comps[0] == x(2, 1));
  CHECK(gs.comps[1] == x(2, 0));
  const auto K = killing(2, ConstantMetric::euclidean(2));
  JetSection rot{{x(2, 1, -1), x(2, 0)}};
  CHECK(apply(K, rot).is_zero());
  const auto R = riemann_linearized(2, ConstantMetric::euclidean(2));
  for (int t = 0; t < 20; ++t) {
    const auto xi = random_section(2, 2, 3);
    CHECK(apply(R, apply(K, xi)).is_zero());
  }
}

TEST_CASE("Killing fields are the rigid motions") {
  CHECK(testsupport::polynomial_kernel_dim(killing(2, ConstantMetric::euclidean(2)), 2) == 3);
  CHECK(testsupport::polynomial_kernel_dim(killing(3, ConstantMetric::euclidean(3)), 3) == 6);
  CHECK(testsupport::polynomial_kernel_dim(killing(4, ConstantMetric::minkowski(4)), 1) == 10);
  CHECK(testsupport::polynomial_kernel_dim(killing(4, ConstantMetric::minkowski(4)), 3) == 10);
  CHECK(testsupport::polynomial_kernel_dim(conformal_killing(4, ConstantMetric::euclidean(4)), 3) == 15);
}

TEST_CASE("apply agrees with symbolic composition and a literal oracle") {
  for (auto metric : {euclid, minkowski})
    for (const auto& D : builtins(metric)) {
      const auto cc = compatibility_conditions(D);
      const auto composite = cc.rows() ? compose(cc, D) : OperatorMatrix();
      for (int t = 0; t < 100; ++t) {
        const auto s = random_section(D.n(), D.cols(), 5);
        const auto Ds = apply(D, s);
        CHECK(Ds == differentiate(D, s));
        if (cc.rows()) {
          CHECK(apply(cc, Ds).is_zero());
          CHECK(apply(composite, s) == apply(cc, Ds));
        }
      }
    }
}

TEST_CASE("Poincare sequence is self-adjoint up to Hodge relabelling") {
  for (int n = 2; n <= 5; ++n) {
    const auto g = ConstantMetric::euclidean(n);
    for (int r = 0; r < n; ++r) {
      const auto ad = adjoint(exterior_derivative(n, r));        // Alt^{r+1} -> Alt^r
      const auto d = exterior_derivative(n, n - r - 1);          // Alt^{n-r-1} -> Alt^{n-r}
      const auto star_hi = hodge_star(n, r + 1, g);              // Alt^{r+1} -> Alt^{n-r-1}
      const auto star_lo = hodge_star(n, r, g);                  // Alt^r -> Alt^{n-r}
      // star_lo . ad  versus  d . star_hi, both Alt^{r+1} -> Alt^{n-r}
      PolyMatrix lhs(star_lo.size(), std::vector<RationalPoly>(static_cast<std::size_t>(ad.cols()), RationalPoly(n)));
      PolyMatrix rhs = lhs;
      for (std::size_t a = 0; a < star_lo.size(); ++a)
        for (int c = 0; c < ad.cols(); ++c) {
          for (int b = 0; b < ad.rows(); ++b) lhs[a][static_cast<std::size_t>(c)] += ad.at(b, c) * star_lo[a][static_cast<std::size_t>(b)];
          for (int b = 0; b < d.cols(); ++b)
            rhs[a][static_cast<std::size_t>(c)] += d.at(static_cast<int>(a), b) * star_hi[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
        }
      PolyMatrix neg = rhs;
      for (auto& row : neg)
        for (auto& p : row) p = -p;
      CAPTURE(n);
      CAPTURE(r);
      CHECK((lhs == rhs || lhs == neg));
    }
  }
}

TEST_CASE("serial and parallel kernels agree") {
  for (const auto& D : builtins(euclid)) {
    const auto cc_s = compatibility_conditions(D, kernels::Exec::Serial);
    const auto cc_p = compatibility_conditions(D, kernels::Exec::Parallel);
    CHECK(cc_s == cc_p);
    if (cc_s.rows()) CHECK(compose(cc_s, D, kernels::Exec::Serial) == compose(cc_s, D, kernels::Exec::Parallel));
    const auto s = random_section(D.n(), D.cols(), 4);
    CHECK(apply(D, s, kernels::Exec::Serial) == apply(D, s, kernels::Exec::Parallel));
  }
}
