// Command-line front end: schema checks, witnesses, validation, query
// evaluation, type inference, satisfiability and emptiness analysis.
//
// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
// input error, 3 internal invariant breach.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gschema/emptiness.hpp"
#include "gschema/json_io.hpp"
#include "gschema/query.hpp"
#include "gschema/schema.hpp"
#include "gschema/typing.hpp"

namespace {

using namespace gschema;
using io::json;

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

struct Options {
  bool compact = false;
  bool strict_condition3 = false;
  bool strict_set = false;
};

DisjointnessMode mode(const Options& o) {
  return o.strict_condition3 ? DisjointnessMode::Literal : DisjointnessMode::ModuloEmptyBag;
}

void print(const json& j, const Options& o) { std::cout << (o.compact ? j.dump() : j.dump(2)) << "\n"; }

std::vector<SchemaElement> load_elements(const std::string& path) {
  return io::elements_from_json(io::parse_json(io::read_text(path)));
}

DataGraph load_graph(const std::string& path, const Options& o) {
  return io::graph_from_json(io::parse_json(io::read_text(path)), o.strict_set);
}

/// Loads a schema that must pass every gate. On failure prints the report and
/// returns nullopt.
std::optional<GraphSchema> load_accepted_schema(const std::string& path, const Options& o) {
  auto elements = load_elements(path);
  const SchemaReport report = check_well_formed(elements, mode(o));
  if (!report.accepted()) {
    std::cerr << "schema '" << path << "' does not pass every gate\n";
    print(io::report_to_json(report), o);
    return std::nullopt;
  }
  return GraphSchema(std::move(elements));
}

int cmd_check_schema(const std::string& path, const Options& o) {
  const SchemaReport report = check_well_formed(load_elements(path), mode(o));
  print(io::report_to_json(report), o);
  return report.accepted() ? kOk : kNegative;
}

int cmd_witness(const std::string& path, const std::string& out_path, const Options& o) {
  const auto s = load_accepted_schema(path, o);
  if (!s) return kNegative;
  const Witness w = witness_graph(*s);
  const json graph = io::graph_to_json(w.graph);
  const std::string text = o.compact ? graph.dump() : graph.dump(2);
  if (out_path == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + out_path + "'");
    out << text << "\n";
  }
  if (out_path != "-") print(io::typing_to_json(w.typing), o);
  return kOk;
}

int cmd_validate(const std::string& schema_path, const std::string& graph_path, const Options& o) {
  if (schema_path == "-" && graph_path == "-") throw FormatError("only one input may be read from stdin");
  const auto s = load_accepted_schema(schema_path, o);
  if (!s) return kNegative;
  const ValidationResult r = validate(load_graph(graph_path, o), *s);
  print(io::validation_to_json(r), o);
  return r.ok() ? kOk : kNegative;
}

int cmd_infer(const std::string& path, const std::string& text, Language lang, const Options& o) {
  const auto s = load_accepted_schema(path, o);
  if (!s) return kNegative;
  const Query q = parse_query(text, lang);
  print({{"pairs", io::pairs_to_json(infer(*s, q))}}, o);
  return kOk;
}

int cmd_sat(const std::string& path, const std::string& text, Language lang, const Options& o) {
  const auto s = load_accepted_schema(path, o);
  if (!s) return kNegative;
  const SatVerdict v = sat(*s, parse_query(text, lang));
  print({{"pairs", io::pairs_to_json(v.evidence)}, {"verdict", verdict_name(v.verdict)}}, o);
  return v.verdict == Verdict::Unsat ? kNegative : kOk;
}

int cmd_eval(const std::string& path, const std::string& text, Language lang, const Options& o) {
  const Query q = parse_query(text, lang);
  print(io::relation_to_json(eval(load_graph(path, o), q)), o);
  return kOk;
}

int cmd_emptiness(const std::string& path, std::uint64_t bound, const Options& o) {
  const EmptinessResult r = analyze_emptiness(load_elements(path), bound);
  print(io::emptiness_to_json(r), o);
  return r.verdict == EmptinessVerdict::NoSolutionWithinBound ? kNegative : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schemas, type inference and satisfiability for path queries over edge-labelled graphs"};
  app.require_subcommand(1);
  Options opts;
  app.add_flag("--compact", opts.compact, "Print JSON on a single line");

  std::string schema_path, graph_path, query_text, out_path, lang_name;
  std::uint64_t bound = 16;
  const std::vector<std::string> languages = {"rpq", "nre", "gxpath"};

  auto* check = app.add_subcommand("check-schema", "Run every schema gate and print the report");
  check->add_option("schema", schema_path, "Schema file, or - for stdin")->required();
  check->add_flag("--strict-condition3", opts.strict_condition3,
                  "Count a shared empty bag as overlap in the disjointness condition");

  auto* witness = app.add_subcommand("witness", "Build a conforming graph with one node per normalised entry");
  witness->add_option("schema", schema_path, "Schema file, or - for stdin")->required();
  witness->add_option("-o,--output", out_path, "Graph output file, or - for stdout")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Type every node of a graph against a schema");
  validate_cmd->add_option("schema", schema_path, "Schema file, or - for stdin")->required();
  validate_cmd->add_option("graph", graph_path, "Graph file, or - for stdin")->required();
  validate_cmd->add_flag("--strict-set", opts.strict_set, "Reject parallel edges with the same endpoints and label");

  auto* infer_cmd = app.add_subcommand("infer", "Infer the element pairs a query can connect");
  infer_cmd->add_option("schema", schema_path, "Schema file, or - for stdin")->required();
  infer_cmd->add_option("query", query_text, "Query text")->required();
  infer_cmd->add_option("--lang", lang_name, "Query language")->check(CLI::IsMember(languages))->default_str("gxpath");

  auto* sat_cmd = app.add_subcommand("sat", "Decide whether a query can return results on some conforming graph");
  sat_cmd->add_option("schema", schema_path, "Schema file, or - for stdin")->required();
  sat_cmd->add_option("query", query_text, "Query text")->required();
  sat_cmd->add_option("--lang", lang_name, "Query language")->check(CLI::IsMember(languages))->default_str("rpq");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a query on a graph");
  eval_cmd->add_option("graph", graph_path, "Graph file, or - for stdin")->required();
  eval_cmd->add_option("query", query_text, "Query text")->required();
  eval_cmd->add_option("--lang", lang_name, "Query language")->check(CLI::IsMember(languages))->default_str("gxpath");
  eval_cmd->add_flag("--strict-set", opts.strict_set, "Reject parallel edges with the same endpoints and label");

  auto* empty_cmd = app.add_subcommand("emptiness", "Build the balance equations of a schema and search for a solution");
  empty_cmd->add_option("schema", schema_path, "Schema file, or - for stdin")->required();
  empty_cmd->add_option("--bound", bound, "Largest value tried for each variable")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  auto language = [&](const char* fallback) { return parse_language(lang_name.empty() ? fallback : lang_name); };

  try {
    if (*check) return cmd_check_schema(schema_path, opts);
    if (*witness) return cmd_witness(schema_path, out_path, opts);
    if (*validate_cmd) return cmd_validate(schema_path, graph_path, opts);
    if (*infer_cmd) return cmd_infer(schema_path, query_text, language("gxpath"), opts);
    if (*sat_cmd) return cmd_sat(schema_path, query_text, language("rpq"), opts);
    if (*eval_cmd) return cmd_eval(graph_path, query_text, language("gxpath"), opts);
    if (*empty_cmd) return cmd_emptiness(schema_path, bound, opts);
  } catch (const AssignmentInfeasible& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
