#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "diffseq/report.hpp"
#include "diffseq/spencer.hpp"

using namespace diffseq;

namespace {

std::vector<OperatorMatrix> operators() {
  std::vector<OperatorMatrix> v;
  for (int n = 2; n <= 4; ++n)
    for (const auto& g : {ConstantMetric::euclidean(n), ConstantMetric::minkowski(n)})
      for (const auto& name : builder_names()) {
        try {
          v.push_back(build_named(name, n, g));
        } catch (const std::invalid_argument&) {
        }
      }
  const auto D = killing(3, ConstantMetric::euclidean(3));
  v.push_back(compatibility_conditions(D));
  v.push_back(adjoint(D));
  return v;
}

Json doc_of(const std::string& name) { return operator_to_json(build_named(name, 3, ConstantMetric::euclidean(3))); }

}  // namespace

TEST_CASE("operator documents round-trip") {
  for (const auto& D : operators()) {
    const auto text = emit_operator(D);
    const auto back = parse_operator(text);
    CAPTURE(D.name());
    CHECK(back == D);
    CHECK(back.notes() == D.notes());
    CHECK(emit_operator(back) == text);
  }
}

TEST_CASE("operator documents are deterministic and sorted") {
  const auto D = conformal_killing(4, ConstantMetric::minkowski(4));
  CHECK(emit_operator(D) == emit_operator(conformal_killing(4, ConstantMetric::minkowski(4))));
  const auto doc = operator_to_json(D);
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["n"] == 4);
  int prev_r = -1, prev_c = -1;
  for (const auto& e : doc["entries"]) {
    const int r = e["row"], c = e["col"];
    CHECK((r > prev_r || (r == prev_r && c > prev_c)));
    prev_r = r;
    prev_c = c;
    for (const auto& t : e["terms"]) {
      CHECK(t["exp"].size() == 4);
      CHECK(t["coef"].get<std::string>().find('/') != std::string::npos);
    }
  }
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_operator("not json"), DocumentError);
  CHECK_THROWS_AS(parse_operator("[]"), DocumentError);
  auto bad_version = doc_of("killing");
  bad_version["schema_version"] = 99;
  CHECK_THROWS_AS(operator_from_json(bad_version), DocumentError);
  auto bad_n = doc_of("killing");
  bad_n["n"] = 9;
  CHECK_THROWS_AS(operator_from_json(bad_n), DocumentError);
  auto bad_exp = doc_of("killing");
  bad_exp["entries"][0]["terms"][0]["exp"] = Json::array({1, 0});
  CHECK_THROWS_AS(operator_from_json(bad_exp), DocumentError);
  auto bad_coef = doc_of("killing");
  bad_coef["entries"][0]["terms"][0]["coef"] = "1/0";
  CHECK_THROWS_AS(operator_from_json(bad_coef), DocumentError);
  auto bad_index = doc_of("killing");
  bad_index["entries"][0]["row"] = 100;
  CHECK_THROWS_AS(operator_from_json(bad_index), DocumentError);
  auto unsorted = doc_of("killing");
  std::swap(unsorted["entries"][0], unsorted["entries"][1]);
  CHECK_THROWS_AS(operator_from_json(unsorted), DocumentError);
  auto missing = doc_of("killing");
  missing.erase("target");
  CHECK_THROWS_AS(operator_from_json(missing), DocumentError);
}

TEST_CASE("sequence report document") {
  const auto rep = build_sequence(killing(4, ConstantMetric::euclidean(4)));
  const auto j = report_to_json(rep);
  CHECK(j["dims"] == Json::array({4, 10, 20, 20, 6}));
  CHECK(j["orders"] == Json::array({1, 2, 1, 1}));
  CHECK(j["euler_characteristic"] == 0);
  CHECK(j["terminated"] == true);
  CHECK(j["all_pass"] == true);
  CHECK(j["caveat"] == kChartCaveat);
  CHECK(j["n"] == 4);
  CHECK(j.dump() == report_to_json(build_sequence(killing(4, ConstantMetric::euclidean(4)))).dump());
  const auto md = report_markdown(rep);
  CHECK(md.find("| ") != std::string::npos);
  CHECK(md.find(kChartCaveat) != std::string::npos);
  const auto open = report_to_json(build_sequence(killing(4, ConstantMetric::euclidean(4)), 1));
  CHECK(open["euler_characteristic"].is_null());
  CHECK(open["all_pass"] == false);
}

TEST_CASE("diagram document") {
  const auto d = spencer_diagram(4, {4, 6, 0, 0, 0}, {4, 10, 20}, {1, 2});
  const auto j = diagram_to_json(d);
  CHECK(j["rows"][0] == Json::array({0, 80, 100, 20}));
  CHECK(diagram_markdown(d, "F1").find("80") != std::string::npos);
}

TEST_CASE("golden tables") {
  const auto& t = golden_tables();
  std::set<std::string> ids;
  for (const auto& e : t) ids.insert(e.id);
  CHECK(ids.size() == t.size());
  auto expected = [&](const std::string& id) {
    for (const auto& e : t)
      if (e.id == id) return e.expected;
    return std::vector<long>{};
  };
  CHECK(expected("killing-5-dims") == std::vector<long>{5, 15, 50, 75, 45, 10});
  CHECK(expected("conformal-5-dims") == std::vector<long>{5, 14, 35, 35, 14, 5});
  CHECK(expected("conformal-5-orders") == std::vector<long>{1, 2, 1, 2, 1});
  CHECK(expected("conformal-4-F2-delta").back() == 9);
  const auto res = check_golden_tables();
  CHECK(res.size() == t.size());
  for (const auto& r : res) {
    CAPTURE(r.id);
    CHECK(r.pass);
    CHECK(r.error.empty());
    CHECK(r.actual == r.expected);
  }
  const auto three = check_golden_tables(3);
  std::set<std::string> three_ids;
  for (const auto& r : three) three_ids.insert(r.id);
  CHECK(three_ids.count("killing-3-dims") == 1);
  CHECK(three_ids.count("conformal-3-dims") == 1);
  CHECK(three_ids.count("killing-4-dims") == 0);
  const auto gj = golden_to_json(three);
  CHECK(gj.dump() == golden_to_json(check_golden_tables(3)).dump());
  CHECK(golden_markdown(three).find("killing-3-dims") != std::string::npos);
}
