#include "diffseq/builders.hpp"

#include <algorithm>

namespace diffseq {

namespace {

RationalPoly chi(int n, int i, const Rational& c = 1) { return RationalPoly::variable(n, i, c); }

RationalPoly chi2(int n, int i, int j, const Rational& c = 1) {
  return RationalPoly::monomial(MultiIndex::unit(n, i) * MultiIndex::unit(n, j), c);
}

void require_metric(int n, const ConstantMetric& g) {
  if (g.n() != n) throw DimensionMismatch("metric dimension differs from n");
}

}  // namespace

FormulaImage formula_image(int n, TensorSpacePtr source, TensorSpacePtr target, const Formula& f) {
  FormulaImage img;
  img.source = source;
  img.target = target;
  const int sd = source->dim();
  for (int a = 0; a < target->ambient_dim(); ++a) {
    std::vector<RationalPoly> row(static_cast<std::size_t>(sd), RationalPoly(n));
    const Emit emit = [&](const std::vector<int>& idx, const RationalPoly& coef) {
      auto loc = source->locate(idx);
      if (!loc) return;
      for (const auto& e : source->expansion()[static_cast<std::size_t>(loc->first)])
        row[static_cast<std::size_t>(e.col)] += coef * (e.val * loc->second);
    };
    f(target->tuple(a), emit);
    img.ambient_rows.push_back(std::move(row));
  }
  return img;
}

int FormulaImage::constraint_violations() const {
  int bad = 0;
  const int sd = source->dim();
  for (const auto& c : target->constraints()) {
    for (int k = 0; k < sd; ++k) {
      RationalPoly s(source->n());
      for (const auto& e : c) s += ambient_rows[static_cast<std::size_t>(e.col)][static_cast<std::size_t>(k)] * e.val;
      if (!s.is_zero()) {
        ++bad;
        break;
      }
    }
  }
  return bad;
}

OperatorMatrix FormulaImage::restricted(int n, std::string name) const {
  PolyMatrix rows;
  for (int c : target->free_components()) rows.push_back(ambient_rows[static_cast<std::size_t>(c)]);
  return OperatorMatrix(n, BundleBasis::of(source), BundleBasis::of(target), std::move(rows), std::move(name));
}

OperatorMatrix killing(int n, const ConstantMetric& g) {
  require_metric(n, g);
  auto img = formula_image(n, tangent_space(n), sym2_space(n), [&](const std::vector<int>& t, const Emit& emit) {
    const int i = t[0], j = t[1];
    for (int r = 0; r < n; ++r) {
      if (g.lower(r, j) != 0) emit({r}, chi(n, i, g.lower(r, j)));
      if (g.lower(i, r) != 0) emit({r}, chi(n, j, g.lower(i, r)));
    }
  });
  auto op = img.restricted(n, "killing");
  op.notes()["metric"] = g.name();
  op.notes()["normalisation"] = "Omega = L(xi) omega, twice the deformation tensor";
  return op;
}

OperatorMatrix conformal_killing(int n, const ConstantMetric& g) {
  if (n < 3) throw std::invalid_argument("conformal Killing operator needs n >= 3");
  require_metric(n, g);
  Rational two_over_n(2, n);
  two_over_n.canonicalize();
  auto img = formula_image(n, tangent_space(n), trace_free_sym2_space(n, g), [&](const std::vector<int>& t, const Emit& emit) {
    const int i = t[0], j = t[1];
    for (int r = 0; r < n; ++r) {
      if (g.lower(r, j) != 0) emit({r}, chi(n, i, g.lower(r, j)));
      if (g.lower(i, r) != 0) emit({r}, chi(n, j, g.lower(i, r)));
      if (g.lower(i, j) != 0) emit({r}, chi(n, r, -two_over_n * g.lower(i, j)));
    }
  });
  if (img.constraint_violations() != 0) throw std::logic_error("conformal Killing image is not trace-free");
  auto op = img.restricted(n, "conformal-killing");
  op.notes()["metric"] = g.name();
  op.notes()["normalisation"] = "L(xi) omega minus (2/n) omega div(xi); target coordinates i<=j without (n,n)";
  return op;
}

FormulaImage riemann_image(int n, const ConstantMetric& g) {
  require_metric(n, g);
  const Rational h(1, 2);
  return formula_image(n, sym2_space(n), riemann_candidate_space(n), [&](const std::vector<int>& t, const Emit& emit) {
    const int k = t[0], l = t[1], i = t[2], j = t[3];
    emit({k, j}, chi2(n, l, i, h));
    emit({k, i}, chi2(n, l, j, -h));
    emit({l, j}, chi2(n, k, i, -h));
    emit({l, i}, chi2(n, k, j, h));
  });
}

OperatorMatrix riemann_linearized(int n, const ConstantMetric& g) {
  auto img = riemann_image(n, g);
  if (img.constraint_violations() != 0) throw std::logic_error("Riemann image violates candidate symmetries");
  auto op = img.restricted(n, "riemann");
  op.notes()["metric"] = g.name();
  op.notes()["normalisation"] = "2 R_{kl,ij} = d_li O_kj - d_lj O_ki - d_ki O_lj + d_kj O_li";
  return op;
}

FormulaImage bianchi_image(int n) {
  return formula_image(n, riemann_candidate_space(n), bianchi_target_space(n), [&](const std::vector<int>& t, const Emit& emit) {
    const int k = t[0], l = t[1], i = t[2], j = t[3], r = t[4];
    emit({k, l, i, j}, chi(n, r));
    emit({k, l, j, r}, chi(n, i));
    emit({k, l, r, i}, chi(n, j));
  });
}

OperatorMatrix bianchi(int n) {
  if (n < 3) throw std::invalid_argument("Bianchi operator needs n >= 3");
  auto img = bianchi_image(n);
  if (img.constraint_violations() != 0) throw std::logic_error("Bianchi image leaves its target space");
  auto op = img.restricted(n, "bianchi");
  op.notes()["normalisation"] = "B_{kl,ijr} = d_r R_{kl,ij} + d_i R_{kl,jr} + d_j R_{kl,ri}";
  return op;
}

OperatorMatrix ricci(int n, const ConstantMetric& g) {
  if (n < 3) throw std::invalid_argument("Ricci operator needs n >= 3");
  auto R = riemann_linearized(n, g);
  const auto& F1 = *R.target().space;
  auto S = sym2_space(n);
  QMatrix c = qzero(S->dim(), F1.dim());
  for (int f = 0; f < F1.dim(); ++f) {
    std::vector<Rational> e(static_cast<std::size_t>(F1.dim()), 0);
    e[static_cast<std::size_t>(f)] = 1;
    const auto ric = ricci_contraction(F1, F1.expand(e), g);
    for (int s = 0; s < S->dim(); ++s) c[static_cast<std::size_t>(s)][static_cast<std::size_t>(f)] = ric[static_cast<std::size_t>(s)];
  }
  auto trace = OperatorMatrix::constant(n, R.target(), BundleBasis::of(S), c, "trace");
  auto op = compose(trace, R);
  op.set_name("ricci");
  op.notes()["metric"] = g.name();
  op.notes()["normalisation"] = "R_lj = omega^{ki} R_{kl,ij}";
  return op;
}

OperatorMatrix einstein(int n, const ConstantMetric& g) {
  auto Ric = ricci(n, g);
  auto S = sym2_space(n);
  const int d = S->dim();
  QMatrix m = qzero(d, d);
  for (int a = 0; a < d; ++a) {
    const auto& ta = S->tuple(a);
    m[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] += 1;
    for (int b = 0; b < d; ++b) {
      const auto& tb = S->tuple(b);
      // trace weight of coordinate b: omega^{pq} summed over both orderings
      Rational w = g.upper(tb[0], tb[1]);
      if (tb[0] != tb[1]) w += g.upper(tb[1], tb[0]);
      m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -= Rational(1, 2) * g.lower(ta[0], ta[1]) * w;
    }
  }
  auto G = OperatorMatrix::constant(n, Ric.target(), Ric.target(), m, "trace-reverse");
  auto op = compose(G, Ric);
  op.set_name("einstein");
  op.notes()["metric"] = g.name();
  op.notes()["normalisation"] = "E = Ric - (1/2) omega tr(Ric)";
  return op;
}

OperatorMatrix exterior_derivative(int n, int r) {
  if (r < 0 || r >= n) throw std::out_of_range("exterior degree out of range");
  auto img = formula_image(n, exterior_space(n, r), exterior_space(n, r + 1), [&](const std::vector<int>& J, const Emit& emit) {
    for (std::size_t k = 0; k < J.size(); ++k) {
      std::vector<int> rest;
      for (std::size_t m = 0; m < J.size(); ++m)
        if (m != k) rest.push_back(J[m]);
      emit(rest, chi(n, J[k], (k % 2 == 0) ? 1 : -1));
    }
  });
  return img.restricted(n, "d" + std::to_string(r));
}

FormulaImage lanczos_image(int n) {
  return formula_image(n, lanczos_constraint_space(n), riemann_candidate_space(n), [&](const std::vector<int>& t, const Emit& emit) {
    const int k = t[0], l = t[1], i = t[2], j = t[3];
    emit({k, l, i}, chi(n, j));
    emit({k, l, j}, chi(n, i, -1));
    emit({i, j, k}, chi(n, l));
    emit({i, j, l}, chi(n, k, -1));
  });
}

OperatorMatrix lanczos_candidate(int n) {
  auto op = lanczos_image(n).restricted(n, "lanczos");
  op.notes()["normalisation"] = "R_{kl,ij} = d_j L_{kl,i} - d_i L_{kl,j} + d_l L_{ij,k} - d_k L_{ij,l}";
  return op;
}

OperatorMatrix sym2_pairing(int n, const ConstantMetric& g) {
  require_metric(n, g);
  auto S = sym2_space(n);
  const int d = S->dim();
  QMatrix w = qzero(d, d);
  auto orbit = [](const std::vector<int>& t) {
    std::vector<std::pair<int, int>> o{{t[0], t[1]}};
    if (t[0] != t[1]) o.emplace_back(t[1], t[0]);
    return o;
  };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (auto [i, j] : orbit(S->tuple(a)))
        for (auto [p, q] : orbit(S->tuple(b))) w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += g.upper(i, p) * g.upper(j, q);
  auto src = BundleBasis::of(S);
  return OperatorMatrix::constant(n, src, adjoint_basis(src), w, "pairing");
}

std::vector<std::string> builder_names() {
  return {"killing", "conformal-killing", "riemann", "bianchi", "ricci", "einstein", "grad", "curl", "div", "lanczos"};
}

OperatorMatrix build_named(const std::string& name, int n, const ConstantMetric& metric) {
  if (name == "killing") return killing(n, metric);
  if (name == "conformal-killing" || name == "conformal_killing") return conformal_killing(n, metric);
  if (name == "riemann") return riemann_linearized(n, metric);
  if (name == "bianchi") return bianchi(n);
  if (name == "ricci") return ricci(n, metric);
  if (name == "einstein") return einstein(n, metric);
  if (name == "grad") return exterior_derivative(n, 0);
  if (name == "curl") {
    if (n != 3) throw std::invalid_argument("curl is defined for n = 3");
    return exterior_derivative(n, 1);
  }
  if (name == "div") return exterior_derivative(n, n - 1);
  if (name == "lanczos") return lanczos_candidate(n);
  if (name.size() >= 2 && name[0] == 'd' && std::all_of(name.begin() + 1, name.end(), ::isdigit))
    return exterior_derivative(n, std::stoi(name.substr(1)));
  throw std::invalid_argument("unknown operator '" + name + "'");
}

}  // namespace diffseq
