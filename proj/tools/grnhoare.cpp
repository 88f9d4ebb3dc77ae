// grnhoare: weakest preconditions and parameter synthesis for discrete gene
// regulatory networks.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "grnhoare.hpp"

namespace {

using namespace grnhoare;

enum Exit : int { kOk = 0, kFailed = 1, kUsage = 2, kUndetermined = 3 };

struct RunConfig {
  std::string network_path;
  std::string triple_path;
  std::string pre, program, post;
  std::string valuation_path;
  std::string mode = "wp";
  std::string format = "text";
  std::uint64_t fuel = 256;
  unsigned jobs = 1;
  bool simplify = false;
  bool timing = false;
  std::uint64_t max_valuations = kDefaultValuationCap;
};

int report_error(const Error& e, int exit_code) {
  std::cerr << "error[" << code_name(e.code()) << "]: " << e.what() << "\n";
  return exit_code;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::SizeLimitExceeded:
    case ErrorCode::ResultTooLarge: return kUndetermined;
    default: return kUsage;
  }
}

OracleLimits oracle_limits(const RunConfig& cfg) {
  OracleLimits limits;
  limits.fuel = cfg.fuel;
  if (const char* env = std::getenv("GRNHOARE_MAX_SETS")) {
    try {
      limits.max_sets = std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::SyntaxError, "GRNHOARE_MAX_SETS must be a positive integer");
    }
  }
  return limits;
}

HoareTriple load_triple(const Network& net, const RunConfig& cfg) {
  const bool inline_parts = !cfg.pre.empty() || !cfg.program.empty() || !cfg.post.empty();
  if (!cfg.triple_path.empty() && inline_parts) {
    throw Error(ErrorCode::SyntaxError, "give either a triple file or --pre/--program/--post, not both");
  }
  if (!cfg.triple_path.empty()) return parse_triple(net, read_file(cfg.triple_path));
  if (cfg.pre.empty() || cfg.program.empty() || cfg.post.empty()) {
    throw Error(ErrorCode::SyntaxError, "a triple file or all of --pre, --program and --post is required");
  }
  return {parse_assertion(net, cfg.pre), parse_program(net, cfg.program), parse_assertion(net, cfg.post)};
}

Valuation load_valuation(const Network& net, const RunConfig& cfg) {
  return parse_valuation(net, cfg.valuation_path.empty() ? std::string() : read_file(cfg.valuation_path));
}

int cmd_validate(const RunConfig& cfg) {
  try {
    const Network net = parse_network(read_file(cfg.network_path));
    std::size_t pinned = 0;
    for (std::size_t p = 0; p < net.param_count(); ++p) pinned += net.fixed_param(p).has_value();
    std::cout << "ok: " << net.variable_count() << " variables, " << net.multiplex_count()
              << " multiplexes, " << net.param_count() << " parameters (" << pinned << " pinned), "
              << net.state_count() << " states\n";
    return kOk;
  } catch (const Error& e) {
    return report_error(e, kFailed);
  }
}

int cmd_wp(const RunConfig& cfg) {
  const Network net = parse_network(read_file(cfg.network_path));
  const HoareTriple t = load_triple(net, cfg);
  const DerivedTriple d = derive_triple(net, t, {cfg.simplify});

  std::optional<bool> satisfiable;
  try {
    satisfiable = check_satisfiability(net, *d.outcome.wp);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SizeLimitExceeded) throw;
  }

  if (cfg.format == "json") {
    ordered_json out;
    out["triple"] = triple_json(net, t);
    out["simplified"] = d.outcome.simplified;
    out["wp"] = to_string(net, *d.outcome.wp);
    out["vcs"] = ordered_json::array();
    for (const auto& vc : d.outcome.vcs) {
      out["vcs"].push_back({{"origin", vc.origin.str()},
                            {"kind", vc_kind_name(vc.kind)},
                            {"formula", to_string(net, *vc.formula)}});
    }
    out["final_implication"] = to_string(net, *d.final_implication);
    out["wp_satisfiable"] = satisfiable ? ordered_json(*satisfiable) : ordered_json(nullptr);
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  std::cout << "wp: " << to_string(net, *d.outcome.wp) << "\n";
  for (std::size_t i = 0; i < d.outcome.vcs.size(); ++i) {
    const auto& vc = d.outcome.vcs[i];
    std::cout << "vc " << i + 1 << " [" << vc_kind_name(vc.kind) << "] at " << vc.origin.str() << ": "
              << to_string(net, *vc.formula) << "\n";
  }
  std::cout << "final: " << to_string(net, *d.final_implication) << "\n";
  std::cout << "wp-satisfiable: " << (satisfiable ? (*satisfiable ? "yes" : "no") : "unknown") << "\n";
  return kOk;
}

int cmd_check(const RunConfig& cfg) {
  const Network net = parse_network(read_file(cfg.network_path));
  const HoareTriple t = load_triple(net, cfg);
  const Valuation k = load_valuation(net, cfg);

  if (cfg.mode == "wp") {
    const DerivedTriple d = derive_triple(net, t, {cfg.simplify});
    std::optional<State> witness = find_counterexample(net, *d.final_implication, k);
    for (std::size_t i = 0; !witness && i < d.outcome.vcs.size(); ++i) {
      witness = find_counterexample(net, *d.outcome.vcs[i].formula, k);
    }
    if (witness) {
      std::cout << "Fails " << state_label(*witness) << "\n";
      return kFailed;
    }
    std::cout << "Holds\n";
    return kOk;
  }
  const StateGraph g(net, k);
  const TripleVerdict v = triple_holds(g, t, oracle_limits(cfg));
  switch (v.status) {
    case TripleVerdict::Status::Holds: std::cout << "Holds\n"; return kOk;
    case TripleVerdict::Status::Fails: std::cout << "Fails " << state_label(*v.witness) << "\n"; return kFailed;
    case TripleVerdict::Status::Undetermined:
      std::cout << "Undetermined (fuel " << cfg.fuel << ")\n";
      return kUndetermined;
  }
  return kUsage;
}

int cmd_solve(const RunConfig& cfg) {
  const Network net = parse_network(read_file(cfg.network_path));
  const HoareTriple t = load_triple(net, cfg);
  SolveOptions opts;
  opts.mode = cfg.mode == "oracle" ? SolveMode::Oracle : SolveMode::Wp;
  opts.limits = oracle_limits(cfg);
  opts.simplify = cfg.simplify;
  opts.jobs = cfg.jobs;
  opts.max_valuations = cfg.max_valuations;
  const SolveReport r = solve_triple(net, t, opts);

  if (cfg.format == "json") {
    std::cout << report_json(net, cfg.network_path, t, r, cfg.timing).dump(2) << "\n";
  } else {
    std::cout << "mode: " << mode_name(r.mode) << "\n"
              << "valuations: " << r.total << "\n"
              << "consistent: " << r.consistent.size() << "\n";
    if (r.mode == SolveMode::Oracle) std::cout << "undetermined: " << r.undetermined.size() << "\n";
    std::cout << "constraint: " << to_string(net, *describe_solution_set(net, r)) << "\n";
    if (cfg.timing) std::cout << "elapsed_ms: " << r.elapsed_ms << "\n";
  }
  if (!r.undetermined.empty()) return kUndetermined;
  return r.consistent.empty() ? kFailed : kOk;
}

int cmd_graph(const RunConfig& cfg) {
  const Network net = parse_network(read_file(cfg.network_path));
  const Valuation k = load_valuation(net, cfg);
  std::cout << state_graph_dot(net, k);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakest preconditions and parameter synthesis for gene regulatory networks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_network = [&](CLI::App* sub) {
    sub->add_option("network", cfg.network_path, "Network file")->required()->check(CLI::ExistingFile);
  };
  auto add_triple = [&](CLI::App* sub) {
    sub->add_option("triple", cfg.triple_path, "Hoare triple file")->check(CLI::ExistingFile);
    sub->add_option("--pre", cfg.pre, "Inline precondition");
    sub->add_option("--program", cfg.program, "Inline path program");
    sub->add_option("--post", cfg.post, "Inline postcondition");
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "Decision route")->check(CLI::IsMember({"oracle", "wp"}));
    sub->add_option("--fuel", cfg.fuel, "While-guard budget for the oracle")->check(CLI::PositiveNumber);
    sub->add_flag("--simplify", cfg.simplify, "Simplify after every derivation step");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a network file");
  add_network(validate);

  CLI::App* wp_cmd = app.add_subcommand("wp", "Print the weakest precondition and verification conditions");
  add_network(wp_cmd);
  add_triple(wp_cmd);
  wp_cmd->add_flag("--simplify", cfg.simplify, "Simplify after every derivation step");
  wp_cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  CLI::App* check = app.add_subcommand("check", "Decide a triple under one valuation");
  add_network(check);
  add_triple(check);
  add_mode(check);
  check->add_option("--valuation", cfg.valuation_path, "Valuation file")->check(CLI::ExistingFile);

  CLI::App* solve = app.add_subcommand("solve", "Enumerate all consistent valuations");
  add_network(solve);
  add_triple(solve);
  add_mode(solve);
  solve->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  solve->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  solve->add_option("--max-valuations", cfg.max_valuations, "Enumeration cap");
  solve->add_flag("--timing", cfg.timing, "Report elapsed time");

  CLI::App* graph = app.add_subcommand("graph", "Render the asynchronous state graph");
  add_network(graph);
  graph->add_option("--valuation", cfg.valuation_path, "Valuation file")->check(CLI::ExistingFile);
  graph->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"dot"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*wp_cmd) return cmd_wp(cfg);
    if (*check) return cmd_check(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*graph) return cmd_graph(cfg);
  } catch (const Error& e) {
    return report_error(e, exit_for(e));
  }
  return kUsage;
}
