#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffseq/sequence.hpp"
#include "diffseq/spencer.hpp"

namespace diffseq {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One chart is fixed throughout, so dual pairs with equal fibre dimension are identified.
extern const char* const kChartCaveat;

/// OperatorDocument: coefficients as "p/q" strings, exponent lists of length n,
/// entries sorted by (row, col) with terms in descending degrevlex order.
Json operator_to_json(const OperatorMatrix& D);
OperatorMatrix operator_from_json(const Json& doc);
std::string emit_operator(const OperatorMatrix& D);
OperatorMatrix parse_operator(const std::string& text);

Json report_to_json(const SequenceReport& r);
std::string report_markdown(const SequenceReport& r);

Json diagram_to_json(const SpencerDiagram& d);
std::string diagram_markdown(const SpencerDiagram& d, const std::string& title);

struct GoldenEntry {
  std::string id;
  std::string family;
  int n = 0;
  std::string description;
  std::vector<long> expected;
  std::function<std::vector<long>()> compute;
};

struct GoldenResult {
  std::string id;
  std::string description;
  std::vector<long> expected;
  std::vector<long> actual;
  bool pass = false;
  std::string error;
};

const std::vector<GoldenEntry>& golden_tables();
/// Recomputes every entry, or only those at dimension n.
std::vector<GoldenResult> check_golden_tables(std::optional<int> n = std::nullopt);
Json golden_to_json(const std::vector<GoldenResult>& results);
std::string golden_markdown(const std::vector<GoldenResult>& results);

}  // namespace diffseq
