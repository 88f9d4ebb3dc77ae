#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "json.hpp"

#include "grnhoare/network.hpp"
#include "grnhoare/oracle.hpp"
#include "grnhoare/program.hpp"
#include "grnhoare/solver.hpp"

namespace grnhoare {

using ordered_json = nlohmann::ordered_json;

/// Printed parameter symbol -> value, in canonical parameter order.
inline ordered_json valuation_json(const Network& net, const Valuation& k) {
  ordered_json out = ordered_json::object();
  for (std::size_t p = 0; p < net.param_count(); ++p) out[net.param_name(p)] = k[p];
  return out;
}

inline ordered_json triple_json(const Network& net, const HoareTriple& t) {
  return {{"pre", to_string(net, *t.pre)},
          {"program", to_string(net, *t.program)},
          {"post", to_string(net, *t.post)}};
}

/// JSON report. `elapsed_ms` is written as 0 unless `with_timing` is set so
/// that output is byte-stable by default.
inline ordered_json report_json(const Network& net, const std::string& network_id,
                                const HoareTriple& t, const SolveReport& r, bool with_timing) {
  ordered_json out;
  out["network"] = network_id;
  out["triple"] = triple_json(net, t);
  out["mode"] = mode_name(r.mode);
  out["total"] = r.total;
  out["consistent"] = ordered_json::array();
  for (const auto& k : r.consistent) out["consistent"].push_back(valuation_json(net, k));
  out["undetermined"] = ordered_json::array();
  for (const auto& k : r.undetermined) out["undetermined"].push_back(valuation_json(net, k));
  out["constraint"] = to_string(net, *describe_solution_set(net, r));
  out["elapsed_ms"] = with_timing ? std::llround(r.elapsed_ms) : 0;
  return out;
}

inline std::string state_label(const State& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + ")";
}

/// Graphviz rendering of the asynchronous state graph. Stable states carry a
/// double border and their self-loop.
inline std::string state_graph_dot(const Network& net, const Valuation& k) {
  std::ostringstream out;
  out << "digraph state_graph {\n";
  out << "  label=\"(";
  for (std::size_t v = 0; v < net.variable_count(); ++v) {
    if (v) out << ',';
    out << net.variable(v).name;
  }
  out << ")\";\n";
  out << "  node [shape=ellipse];\n";
  const auto states = enumerate_states(net);
  for (const State& s : states) {
    out << "  \"" << state_label(s) << "\"";
    if (is_stable(net, k, s)) out << " [peripheries=2]";
    out << ";\n";
  }
  for (const State& s : states) {
    for (const State& t : successors(net, k, s)) {
      out << "  \"" << state_label(s) << "\" -> \"" << state_label(t) << "\";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace grnhoare
