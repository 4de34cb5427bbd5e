#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "diffseq/report.hpp"

using namespace diffseq;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kResource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string name;
  int n = 4;
  std::string metric = "euclidean";
  std::string file;
  int max_steps = -1;
  int depth = 2;
  std::optional<int> golden_n;
  bool json = false;
  bool markdown = false;
};

void check_n(int n) {
  if (n < 2 || n > 6) throw UsageError("n must lie in 2..6");
}

std::string read_input(const std::string& path) {
  std::ostringstream os;
  if (path == "-") {
    os << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    os << in.rdbuf();
  }
  return os.str();
}

std::string operator_markdown(const OperatorMatrix& D) {
  std::ostringstream os;
  os << "# " << (D.name().empty() ? std::string("operator") : D.name()) << "\n\n";
  os << "- n: " << D.n() << "\n- source: " << D.source().label << " (" << D.cols() << ")\n- target: " << D.target().label
     << " (" << D.rows() << ")\n- order: " << D.order() << "\n";
  for (const auto& [k, v] : D.notes()) os << "- " << k << ": " << v << "\n";
  os << "\n| row | col | entry |\n|---|---|---|\n";
  for (int r = 0; r < D.rows(); ++r)
    for (int c = 0; c < D.cols(); ++c)
      if (!D.at(r, c).is_zero())
        os << "| " << D.target().elements[static_cast<std::size_t>(r)] << " | " << D.source().elements[static_cast<std::size_t>(c)]
           << " | " << D.at(r, c).to_string("chi") << " |\n";
  return os.str();
}

void print_operator(const Options& o, const OperatorMatrix& D) {
  if (o.markdown)
    std::cout << operator_markdown(D);
  else
    std::cout << emit_operator(D);
}

int print_report(const Options& o, const SequenceReport& r) {
  if (o.markdown)
    std::cout << report_markdown(r);
  else
    std::cout << report_to_json(r).dump(2) << "\n";
  return r.all_pass() ? kPass : kFail;
}

OperatorMatrix build(const Options& o) {
  check_n(o.n);
  return build_named(o.name, o.n, ConstantMetric::by_name(o.metric, o.n));
}

void add_format(CLI::App* app, Options& o) {
  auto* j = app->add_flag("--json", o.json, "JSON output (default)");
  auto* m = app->add_flag("--markdown", o.markdown, "Markdown output");
  j->excludes(m);
}

void add_operator_args(CLI::App* app, Options& o) {
  app->add_option("name", o.name, "operator name")->required();
  app->add_option("--n", o.n, "base dimension (2..6)");
  app->add_option("--metric", o.metric, "euclidean or minkowski")->check(CLI::IsMember({"euclidean", "minkowski"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compatibility conditions, adjoints and differential sequences of constant-coefficient operators"};
  app.require_subcommand(1);
  Options o;
  std::string builders;
  for (const auto& b : builder_names()) builders += (builders.empty() ? "" : ", ") + b;

  auto* build_cmd = app.add_subcommand("build", "emit an operator document (" + builders + ", d<r>)");
  add_operator_args(build_cmd, o);
  add_format(build_cmd, o);

  auto* cc_cmd = app.add_subcommand("cc", "compatibility conditions of an operator document");
  cc_cmd->add_option("file", o.file, "operator document, - for stdin")->required();
  add_format(cc_cmd, o);

  auto* adj_cmd = app.add_subcommand("adjoint", "formal adjoint of an operator document");
  adj_cmd->add_option("file", o.file, "operator document, - for stdin")->required();
  add_format(adj_cmd, o);

  auto* seq_cmd = app.add_subcommand("sequence", "iterate compatibility conditions from a named operator");
  add_operator_args(seq_cmd, o);
  seq_cmd->add_option("--max-steps", o.max_steps, "CC computations to attempt (default n+1)");
  add_format(seq_cmd, o);

  auto* check_cmd = app.add_subcommand("check", "verification suites; exit 1 on failure");
  check_cmd->require_subcommand(1);
  auto* dd_cmd = check_cmd->add_subcommand("double-duality", "adjoint chain parametrizes itself");
  add_operator_args(dd_cmd, o);
  dd_cmd->add_option("--depth", o.depth, "positions to check");
  add_format(dd_cmd, o);
  auto* lc_cmd = check_cmd->add_subcommand("lanczos-contradiction", "Bianchi does not vanish on the Lanczos candidate");
  lc_cmd->add_option("--metric", o.metric)->check(CLI::IsMember({"euclidean", "minkowski"}));
  add_format(lc_cmd, o);
  auto* lm_cmd = check_cmd->add_subcommand("lemma41", "contracted Bianchi identity and the trace arrow at n=4");
  lm_cmd->add_option("--metric", o.metric)->check(CLI::IsMember({"euclidean", "minkowski"}));
  add_format(lm_cmd, o);
  auto* gt_cmd = check_cmd->add_subcommand("golden-tables", "recompute every tabulated dimension");
  gt_cmd->add_option("--n", o.golden_n, "restrict to one dimension");
  add_format(gt_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*build_cmd) {
      print_operator(o, build(o));
      return kPass;
    }
    if (*cc_cmd || *adj_cmd) {
      const auto D = parse_operator(read_input(o.file));
      print_operator(o, *cc_cmd ? compatibility_conditions(D) : adjoint(D));
      return kPass;
    }
    if (*seq_cmd) {
      if (o.max_steps == 0 || o.max_steps < -1) throw UsageError("--max-steps must be at least 1");
      return print_report(o, build_sequence(build(o), o.max_steps));
    }
    if (*dd_cmd) {
      if (o.depth < 1) throw UsageError("--depth must be at least 1");
      return print_report(o, double_duality_report(build(o), o.depth));
    }
    if (*lc_cmd) return print_report(o, lanczos_contradiction_report(ConstantMetric::by_name(o.metric, 4)));
    if (*lm_cmd) return print_report(o, lemma41_check(ConstantMetric::by_name(o.metric, 4)));
    if (*gt_cmd) {
      if (o.golden_n) check_n(*o.golden_n);
      const auto res = check_golden_tables(o.golden_n);
      if (o.markdown)
        std::cout << golden_markdown(res);
      else
        std::cout << golden_to_json(res).dump(2) << "\n";
      bool all = true;
      for (const auto& r : res) {
        all &= r.pass;
        if (!r.pass)
          std::cerr << "mismatch " << r.id << ": expected " << Json(r.expected).dump() << " got "
                    << (r.error.empty() ? Json(r.actual).dump() : r.error) << "\n";
      }
      return all ? kPass : kFail;
    }
  } catch (const DegreeCapExceeded& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const ExponentCapExceeded& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DocumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
