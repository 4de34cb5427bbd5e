#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diffseq/metric.hpp"
#include "diffseq/polynomial.hpp"
#include "support.hpp"

using namespace diffseq;
using testsupport::random_poly;

namespace {

RationalPoly x(int n, int i, Rational c = 1) { return RationalPoly::variable(n, i, c); }
RationalPoly monomial(std::initializer_list<int> e, Rational c = 1) { return RationalPoly::monomial(MultiIndex(e), c); }

}  // namespace

TEST_CASE("poly_mul examples") {
  CHECK(poly_mul(x(2, 0), x(2, 1)) == monomial({1, 1}));
  CHECK(poly_mul(x(2, 0) + x(2, 1), x(2, 0) - x(2, 1)) == monomial({2, 0}) - monomial({0, 2}));
  CHECK(poly_mul(monomial({2, 0}, Rational(1, 2)), x(2, 1, -2)) == monomial({2, 1}, -1));
}

TEST_CASE("poly_mul rejects mixed dimensions") {
  CHECK_THROWS_AS(poly_mul(x(2, 0), x(3, 0)), DimensionMismatch);
}

TEST_CASE("negate_vars examples") {
  CHECK(negate_vars(x(2, 0)) == x(2, 0, -1));
  CHECK(negate_vars(monomial({1, 1})) == monomial({1, 1}));
  const auto p = RationalPoly::constant(2, 3) - monomial({2, 0}) + x(2, 1);
  CHECK(negate_vars(p) == RationalPoly::constant(2, 3) - monomial({2, 0}) - x(2, 1));
}

TEST_CASE("compare_monomials examples") {
  CHECK(compare_monomials(MultiIndex{1, 1}, MultiIndex{2, 0}) == std::strong_ordering::less);
  CHECK(compare_monomials(MultiIndex{0, 1}, MultiIndex{1, 0}) == std::strong_ordering::less);
  CHECK(compare_monomials(MultiIndex{0, 0}, MultiIndex{1, 0}) == std::strong_ordering::less);
  CHECK_THROWS_AS(compare_monomials(MultiIndex{1, 0}, MultiIndex{1, 0, 0}), DimensionMismatch);
}

TEST_CASE("ring axioms on random polynomials") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testsupport::uniform(1, 4);
    const auto a = random_poly(n, 3, 4), b = random_poly(n, 3, 4), c = random_poly(n, 3, 4);
    CHECK(poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c)));
    CHECK(poly_mul(a, b + c) == poly_mul(a, b) + poly_mul(a, c));
    CHECK(poly_mul(a, b) == poly_mul(b, a));
    CHECK((a + b) + c == a + (b + c));
    CHECK((a - a).is_zero());
    if (!a.is_zero() && !b.is_zero()) CHECK(poly_mul(a, b).degree() == a.degree() + b.degree());
  }
}

TEST_CASE("negate_vars is an involution and a ring map") {
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_poly(3, 4, 5), b = random_poly(3, 4, 5);
    CHECK(negate_vars(negate_vars(a)) == a);
    CHECK(negate_vars(poly_mul(a, b)) == poly_mul(negate_vars(a), negate_vars(b)));
  }
}

TEST_CASE("terms stay sorted and free of zeros") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_poly(3, 4, 8) * Rational(1, 3) + random_poly(3, 4, 8);
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
      CHECK(p.terms()[i].coef != 0);
      CHECK(p.terms()[i].coef.get_den() > 0);
      if (i) CHECK(compare_monomials(p.terms()[i - 1].mono, p.terms()[i].mono) == std::strong_ordering::greater);
    }
  }
}

TEST_CASE("compare_monomials is a multiplicative total order") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<MultiIndex> all;
    for (int d = 0; d <= 4; ++d)
      for (const auto& m : monomials_of_degree(n, d)) all.push_back(m);
    for (const auto& a : all)
      for (const auto& b : all) {
        const auto ab = compare_monomials(a, b);
        CHECK((ab == std::strong_ordering::equal) == (a == b));
        CHECK(compare_monomials(b, a) == (0 <=> ab));
        if (ab == std::strong_ordering::less)
          for (int i = 0; i < n; ++i) CHECK(compare_monomials(a.raised(i), b.raised(i)) == std::strong_ordering::less);
      }
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j)
        for (std::size_t k = 0; k < all.size(); k += 3)
          if (compare_monomials(all[i], all[j]) < 0 && compare_monomials(all[j], all[k]) < 0)
            CHECK(compare_monomials(all[i], all[k]) < 0);
  }
}

TEST_CASE("monomial counts") {
  for (int n = 1; n <= 6; ++n)
    for (int d = 0; d <= 5; ++d) CHECK(monomials_of_degree(n, d).size() == count_monomials(n, d));
  CHECK(count_monomials(4, 3) == 20);
}

TEST_CASE("exponent cap") {
  const int old = exponent_cap();
  set_exponent_cap(4);
  CHECK_THROWS_AS(poly_mul(monomial({3, 0}), monomial({2, 0})), ExponentCapExceeded);
  set_exponent_cap(old);
  CHECK(poly_mul(monomial({3, 0}), monomial({2, 0})) == monomial({5, 0}));
}

TEST_CASE("rational text") {
  CHECK(rational_to_string(parse_rational("6/4")) == "3/2");
  CHECK(rational_to_string(Rational(-5)) == "-5/1");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("derivative and evaluation") {
  const auto p = monomial({2, 1}, 3) + x(2, 1);
  CHECK(p.derivative(MultiIndex{1, 0}) == monomial({1, 1}, 6));
  CHECK(p.derivative(MultiIndex{2, 1}) == RationalPoly::constant(2, 6));
  const std::vector<Rational> pt{2, 5};
  CHECK(p.evaluate(pt) == 3 * 4 * 5 + 5);
}

TEST_CASE("constant metrics") {
  for (int n = 2; n <= 6; ++n)
    for (const auto& g : {ConstantMetric::euclidean(n), ConstantMetric::minkowski(n)})
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Rational s = 0;
          for (int k = 0; k < n; ++k) s += g.lower(i, k) * g.upper(k, j);
          CHECK(s == (i == j ? 1 : 0));
          CHECK(g.lower(i, j) == g.lower(j, i));
        }
  CHECK(ConstantMetric::minkowski(4).det() == -1);
  CHECK_THROWS_AS(ConstantMetric({{1, 1}, {1, 1}}), DegenerateMetric);
  CHECK_THROWS_AS(ConstantMetric({{1, 2}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS(ConstantMetric::by_name("lorentzian-ish", 3));
  const ConstantMetric g({{2, 1}, {1, 3}});
  CHECK(g.upper(0, 0) == Rational(3, 5));
  CHECK(g.upper(0, 1) == Rational(-1, 5));
}
