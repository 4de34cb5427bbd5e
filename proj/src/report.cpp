#include "diffseq/report.hpp"

#include <sstream>

namespace diffseq {

const char* const kChartCaveat =
    "All bundles are trivialised over one global chart. A bundle and its formal adjoint with the same fibre "
    "dimension are therefore treated as the same vector space; how they would transform under a change of "
    "coordinates is not tracked.";

namespace {

Json basis_json(const BundleBasis& b) { return Json{{"label", b.label}, {"elements", b.elements}}; }

BundleBasis basis_from(const Json& j) {
  BundleBasis b;
  b.label = j.at("label").get<std::string>();
  b.elements = j.at("elements").get<std::vector<std::string>>();
  return b;
}

std::string metric_name(const OperatorMatrix& D) {
  auto it = D.notes().find("metric");
  return it == D.notes().end() ? std::string("none") : it->second;
}

std::string list(const std::vector<int>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

std::string list(const std::vector<long>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

}  // namespace

Json operator_to_json(const OperatorMatrix& D) {
  Json entries = Json::array();
  for (int r = 0; r < D.rows(); ++r)
    for (int c = 0; c < D.cols(); ++c) {
      const auto& p = D.at(r, c);
      if (p.is_zero()) continue;
      Json terms = Json::array();
      for (const auto& t : p.terms()) {
        std::vector<int> exp(static_cast<std::size_t>(D.n()));
        for (int i = 0; i < D.n(); ++i) exp[static_cast<std::size_t>(i)] = t.mono[i];
        terms.push_back(Json{{"coef", rational_to_string(t.coef)}, {"exp", exp}});
      }
      entries.push_back(Json{{"row", r}, {"col", c}, {"terms", terms}});
    }
  Json notes = Json::object();
  for (const auto& [k, v] : D.notes()) notes[k] = v;
  return Json{{"schema_version", kSchemaVersion},
              {"name", D.name()},
              {"n", D.n()},
              {"metric", metric_name(D)},
              {"source", basis_json(D.source())},
              {"target", basis_json(D.target())},
              {"notes", notes},
              {"entries", entries}};
}

OperatorMatrix operator_from_json(const Json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) throw DocumentError("unsupported schema_version");
    const int n = doc.at("n").get<int>();
    if (n < 1 || n > kMaxVars) throw DocumentError("n out of range");
    BundleBasis src = basis_from(doc.at("source")), tgt = basis_from(doc.at("target"));
    PolyMatrix e(static_cast<std::size_t>(tgt.dim()), std::vector<RationalPoly>(static_cast<std::size_t>(src.dim()), RationalPoly(n)));
    int last_r = -1, last_c = -1;
    for (const auto& entry : doc.at("entries")) {
      const int r = entry.at("row").get<int>(), c = entry.at("col").get<int>();
      if (r < 0 || r >= tgt.dim() || c < 0 || c >= src.dim()) throw DocumentError("entry index out of range");
      if (r < last_r || (r == last_r && c <= last_c)) throw DocumentError("entries not sorted by (row, col)");
      last_r = r;
      last_c = c;
      std::vector<Term> terms;
      for (const auto& t : entry.at("terms")) {
        const auto exp = t.at("exp").get<std::vector<int>>();
        if (static_cast<int>(exp.size()) != n) throw DocumentError("exponent list length differs from n");
        terms.push_back(Term{MultiIndex::from(exp), parse_rational(t.at("coef").get<std::string>())});
      }
      e[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = RationalPoly::from_terms(n, std::move(terms));
    }
    OperatorMatrix D(n, std::move(src), std::move(tgt), std::move(e), doc.value("name", std::string()));
    if (doc.contains("notes"))
      for (const auto& [k, v] : doc.at("notes").items()) D.notes()[k] = v.get<std::string>();
    return D;
  } catch (const nlohmann::json::exception& ex) {
    throw DocumentError(std::string("malformed operator document: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw DocumentError(std::string("malformed operator document: ") + ex.what());
  }
}

std::string emit_operator(const OperatorMatrix& D) { return operator_to_json(D).dump(2) + "\n"; }

OperatorMatrix parse_operator(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw DocumentError(std::string("invalid JSON: ") + ex.what());
  }
  return operator_from_json(doc);
}

Json report_to_json(const SequenceReport& r) {
  Json chain = Json::array();
  for (const auto& s : r.chain)
    chain.push_back(Json{{"operator", s.name},
                         {"order", s.order},
                         {"source_dim", s.source_dim},
                         {"target_dim", s.target_dim},
                         {"generator_degrees", s.generator_degrees}});
  Json verdicts = Json::array();
  for (const auto& [name, v] : r.verdicts) verdicts.push_back(Json{{"check", name}, {"pass", v.pass}, {"witness", v.witness}});
  Json j{{"title", r.title}, {"n", r.n}, {"metric", r.metric}, {"chain", chain}, {"dims", r.dims()}, {"orders", r.orders()},
         {"terminated", r.terminated}};
  j["euler_characteristic"] = r.euler_characteristic ? Json(*r.euler_characteristic) : Json(nullptr);
  j["verdicts"] = verdicts;
  j["all_pass"] = r.all_pass();
  j["notes"] = r.notes;
  j["caveat"] = kChartCaveat;
  return j;
}

std::string report_markdown(const SequenceReport& r) {
  std::ostringstream os;
  os << "# " << r.title << "\n\n";
  os << "- n: " << r.n << "\n- metric: " << r.metric << "\n";
  if (!r.chain.empty()) {
    os << "- dims: " << list(r.dims()) << "\n- orders: " << list(r.orders()) << "\n";
    os << "- terminated: " << (r.terminated ? "yes" : "no") << "\n";
    if (r.euler_characteristic) os << "- euler characteristic: " << *r.euler_characteristic << "\n";
    os << "\n| step | operator | order | source | target | generator degrees |\n|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < r.chain.size(); ++i) {
      const auto& s = r.chain[i];
      os << "| " << i << " | " << s.name << " | " << s.order << " | " << s.source_dim << " | " << s.target_dim << " | "
         << (s.generator_degrees.empty() ? std::string("-") : list(s.generator_degrees)) << " |\n";
    }
  }
  if (!r.verdicts.empty()) {
    os << "\n| check | result | witness |\n|---|---|---|\n";
    for (const auto& [name, v] : r.verdicts) os << "| " << name << " | " << (v.pass ? "pass" : "FAIL") << " | " << v.witness << " |\n";
  }
  if (!r.notes.empty()) {
    os << "\nNotes:\n\n";
    for (const auto& n : r.notes) os << "- " << n << "\n";
  }
  os << "\n> " << kChartCaveat << "\n";
  return os.str();
}

Json diagram_to_json(const SpencerDiagram& d) {
  return Json{{"n", d.n},
              {"top", d.top},
              {"columns", d.column_labels},
              {"rows", d.rows},
              {"row_sums", d.row_sums()},
              {"balanced", d.rows_balanced()}};
}

std::string diagram_markdown(const SpencerDiagram& d, const std::string& title) {
  std::ostringstream os;
  os << "## " << title << "\n\n| r |";
  for (const auto& c : d.column_labels) os << " " << c << " |";
  os << " alternating sum |\n|---|";
  for (std::size_t i = 0; i < d.column_labels.size(); ++i) os << "---|";
  os << "---|\n";
  const auto sums = d.row_sums();
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    os << "| " << r << " |";
    for (long v : d.rows[r]) os << " " << v << " |";
    os << " " << sums[r] << " |\n";
  }
  return os.str();
}

namespace {

std::vector<long> to_long(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::vector<int> symbol_dims(const OperatorMatrix& D, int count) {
  std::vector<int> d{D.cols()};
  for (const auto& g : prolongation_chain(symbol_of(D), count)) d.push_back(g.dim());
  d.resize(static_cast<std::size_t>(count), 0);
  return d;
}

std::vector<long> flatten(const SpencerDiagram& d) {
  std::vector<long> out;
  for (const auto& r : d.rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

// Diagram defining the last bundle of the first `ops` operators of the chain from D.
std::vector<long> chain_diagram(const OperatorMatrix& D, int ops) {
  const auto rep = build_sequence(D, ops - 1);
  auto dims = rep.dims();
  auto orders = rep.orders();
  dims.resize(static_cast<std::size_t>(ops + 1));
  orders.resize(static_cast<std::size_t>(ops));
  int top = 0;
  for (int o : orders) top += o;
  const auto d = spencer_diagram(D.n(), symbol_dims(D, top + 1), dims, orders);
  auto out = flatten(d);
  out.push_back(d.rows_balanced() ? 1 : 0);
  return out;
}

std::vector<long> dims_of(const OperatorMatrix& D) { return to_long(build_sequence(D).dims()); }
std::vector<long> orders_of(const OperatorMatrix& D) { return to_long(build_sequence(D).orders()); }
std::vector<long> euler_of(const OperatorMatrix& D) {
  const auto r = build_sequence(D);
  if (!r.euler_characteristic) throw std::runtime_error("chain did not terminate");
  return {*r.euler_characteristic};
}

// (domain of delta_r on g_q, rank of delta_r, H^r(g_q))
std::vector<long> delta_slice(const OperatorMatrix& D, int r, int q) {
  const auto chain = prolongation_chain(symbol_of(D), q + 1);
  if (static_cast<int>(chain.size()) < q) throw std::runtime_error("symbol vanishes below the requested order");
  const auto& gq = chain[static_cast<std::size_t>(q - 1)];
  const auto slice = delta_map(r, gq);
  return {slice.domain_dim, slice.rank(), delta_cohomology(gq, prolong(gq), r)};
}

std::vector<GoldenEntry> make_tables() {
  std::vector<GoldenEntry> t;
  auto E = [](int n) { return ConstantMetric::euclidean(n); };
  const std::vector<std::vector<long>> killing_dims{{2, 3, 1}, {3, 6, 6, 3}, {4, 10, 20, 20, 6}, {5, 15, 50, 75, 45, 10}};
  for (int n = 2; n <= 5; ++n) {
    t.push_back({"killing-" + std::to_string(n) + "-dims", "killing", n, "Killing sequence fibre dimensions",
                 killing_dims[static_cast<std::size_t>(n - 2)], [=] { return dims_of(killing(n, E(n))); }});
    t.push_back({"killing-" + std::to_string(n) + "-euler", "killing", n, "Killing sequence Euler characteristic", {0},
                 [=] { return euler_of(killing(n, E(n))); }});
  }
  t.push_back({"killing-4-orders", "killing", 4, "Killing sequence operator orders", {1, 2, 1, 1},
               [=] { return orders_of(killing(4, E(4))); }});
  const std::vector<std::vector<long>> conf_dims{{3, 5, 5, 3}, {4, 9, 10, 9, 4}, {5, 14, 35, 35, 14, 5}};
  const std::vector<std::vector<long>> conf_orders{{1, 3, 1}, {1, 2, 2, 1}, {1, 2, 1, 2, 1}};
  for (int n = 3; n <= 5; ++n) {
    const auto i = static_cast<std::size_t>(n - 3);
    t.push_back({"conformal-" + std::to_string(n) + "-dims", "conformal", n, "conformal sequence fibre dimensions",
                 conf_dims[i], [=] { return dims_of(conformal_killing(n, E(n))); }});
    t.push_back({"conformal-" + std::to_string(n) + "-orders", "conformal", n, "conformal sequence operator orders",
                 conf_orders[i], [=] { return orders_of(conformal_killing(n, E(n))); }});
    t.push_back({"conformal-" + std::to_string(n) + "-euler", "conformal", n, "conformal sequence Euler characteristic",
                 {0}, [=] { return euler_of(conformal_killing(n, E(n))); }});
  }
  t.push_back({"killing-4-F1-delta", "delta", 4, "Lambda2 (x) g1 -> Lambda3 (x) T: domain, rank, kernel modulo image",
               {36, 16, 20}, [=] { return delta_slice(killing(4, E(4)), 2, 1); }});
  t.push_back({"killing-4-F2-delta", "delta", 4, "Lambda3 (x) g1 -> Lambda4 (x) T: domain, rank, kernel modulo image",
               {24, 4, 20}, [=] { return delta_slice(killing(4, E(4)), 3, 1); }});
  t.push_back({"conformal-4-F2-delta", "delta", 4, "Lambda3 (x) g2 -> Lambda4 (x) T* (x) T for conformal: domain, rank, cohomology",
               {16, 7, 9}, [=] { return delta_slice(conformal_killing(4, E(4)), 3, 2); }});
  t.push_back({"killing-4-F1-diagram", "diagram", 4, "diagram rows defining F1 (g, E, F0, F1), then balanced flag",
               {0, 80, 100, 20, 0, 160, 160, 0, 36, 96, 60, 0, 16, 16, 0, 0, 1},
               [=] { return chain_diagram(killing(4, E(4)), 2); }});
  t.push_back({"killing-4-F2-diagram", "diagram", 4, "diagram rows defining F2 (g, E, F0, F1, F2), then balanced flag",
               {0, 140, 200, 80, 20, 0, 320, 400, 80, 0, 0, 240, 240, 0, 0, 24, 64, 40, 0, 0, 4, 4, 0, 0, 0, 1},
               [=] { return chain_diagram(killing(4, E(4)), 3); }});
  t.push_back({"conformal-4-F2-diagram", "diagram", 4, "conformal diagram rows defining F2 (g, E, F0, F1, F2), then balanced flag",
               {0, 224, 315, 100, 9, 0, 560, 720, 160, 0, 0, 480, 540, 60, 0, 16, 160, 144, 0, 0, 7, 16, 9, 0, 0, 1},
               [=] { return chain_diagram(conformal_killing(4, E(4)), 3); }});
  t.push_back({"lanczos-4-count", "splitting", 4, "Lanczos potential: Alt2 (x) T* components, constraints, free", {24, 4, 20}, [] {
                 const auto L = lanczos_constraint_space(4);
                 return std::vector<long>{L->ambient_dim(), L->constraint_rank(), L->dim()};
               }});
  t.push_back({"splitting-4", "splitting", 4, "Riemann candidate = Ricci part + Weyl part", {20, 10, 10}, [=] {
                 const auto S = split_riemann(4, E(4));
                 return std::vector<long>{S.riemann->dim(), S.ricci->dim(), S.weyl->dim()};
               }});
  t.push_back({"einstein-4-cc", "splitting", 4, "CC of Einstein: generator count and highest degree", {4, 1}, [=] {
                 const auto cc = compatibility_conditions(einstein(4, E(4)));
                 return std::vector<long>{cc.rows(), cc.order()};
               }});
  t.push_back({"weyl-4-relations", "splitting", 4, "Bianchi on Weyl part: relations, CC, differential rank", {16, 6, 10}, [=] {
                 const auto w = weyl_relations(E(4));
                 return std::vector<long>{w.relations, w.cc, w.differential_rank};
               }});
  return t;
}

}  // namespace

const std::vector<GoldenEntry>& golden_tables() {
  static const std::vector<GoldenEntry> tables = make_tables();
  return tables;
}

std::vector<GoldenResult> check_golden_tables(std::optional<int> n) {
  std::vector<GoldenResult> out;
  for (const auto& e : golden_tables()) {
    if (n && e.n != *n) continue;
    GoldenResult r{e.id, e.description, e.expected, {}, false, {}};
    try {
      r.actual = e.compute();
      r.pass = r.actual == r.expected;
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

Json golden_to_json(const std::vector<GoldenResult>& results) {
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all &= r.pass;
    Json j{{"id", r.id}, {"description", r.description}, {"expected", r.expected}, {"actual", r.actual}, {"pass", r.pass}};
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(j);
  }
  return Json{{"entries", arr}, {"all_pass", all}, {"caveat", kChartCaveat}};
}

std::string golden_markdown(const std::vector<GoldenResult>& results) {
  std::ostringstream os;
  os << "# golden tables\n\n| id | expected | actual | result |\n|---|---|---|---|\n";
  for (const auto& r : results)
    os << "| " << r.id << " | " << list(r.expected) << " | " << (r.error.empty() ? list(r.actual) : "error: " + r.error)
       << " | " << (r.pass ? "pass" : "FAIL") << " |\n";
  os << "\n> " << kChartCaveat << "\n";
  return os.str();
}

}  // namespace diffseq
