#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grnhoare.hpp"

namespace grnhoare::testing {

inline std::string model_path(const std::string& name) {
  return std::string(GRNHOARE_MODELS_DIR) + "/" + name;
}

inline Network load_network(const std::string& name) {
  return parse_network(read_file(model_path(name)));
}

inline HoareTriple load_triple(const Network& net, const std::string& name) {
  return parse_triple(net, read_file(model_path(name)));
}

inline Network fig1() { return load_network("fig1.grn"); }
inline Valuation fig1_valuation(const Network& net) {
  return parse_valuation(net, read_file(model_path("fig1.val")));
}
inline Network feedforward() { return load_network("feedforward.grn"); }

inline State state(std::vector<int> levels) { return State{std::move(levels)}; }

/// Parameter index by printed name, e.g. "K[b,{sigma}]".
inline std::size_t param(const Network& net, const std::string& printed) {
  for (std::size_t p = 0; p < net.param_count(); ++p) {
    if (net.param_name(p) == printed) return p;
  }
  throw Error(ErrorCode::UnknownSymbol, printed);
}

/// Every (state, valuation) pair of the full parameter space.
template <typename F>
void for_all_pairs(const Network& net, F&& f) {
  ValuationSpace space(net);
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    const Valuation k = space.at(i);
    for (std::uint64_t s = 0; s < net.state_count(); ++s) f(net.state_at(s), k);
  }
}

inline bool equivalent(const Network& net, const Assertion& a, const Assertion& b) {
  bool same = true;
  for_all_pairs(net, [&](const State& s, const Valuation& k) {
    if (same && eval_assertion(a, s, k) != eval_assertion(b, s, k)) same = false;
  });
  return same;
}

// ---------------------------------------------------------------------------
// Random generators

struct NetworkShape {
  int max_variables = 3;
  int max_bound = 2;
  int max_targets_per_variable = 2;
  std::uint64_t max_valuations = 729;
};

inline std::string random_network_text(std::mt19937& rng, const NetworkShape& shape = {}) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (;;) {
    const int nv = uniform(1, shape.max_variables);
    std::vector<int> bounds;
    for (int v = 0; v < nv; ++v) bounds.push_back(uniform(1, shape.max_bound));
    std::string text = "network {\n";
    for (int v = 0; v < nv; ++v) {
      text += "  var x" + std::to_string(v) + ": 0.." + std::to_string(bounds[v]) + ";\n";
    }
    int nmux = 0;
    std::string targets;
    std::uint64_t valuations = 1;
    for (int v = 0; v < nv; ++v) {
      const int k = uniform(0, shape.max_targets_per_variable);
      std::string names;
      for (int j = 0; j < k; ++j) {
        const std::string name = "m" + std::to_string(nmux);
        // Formulas reference variables and earlier multiplexes only.
        auto leaf = [&]() -> std::string {
          if (nmux > 0 && uniform(0, 4) == 0) return "m" + std::to_string(uniform(0, nmux - 1));
          const int u = uniform(0, nv - 1);
          return "x" + std::to_string(u) + ">=" + std::to_string(uniform(1, bounds[u]));
        };
        std::string f;
        switch (uniform(0, 3)) {
          case 0: f = leaf(); break;
          case 1: f = "!" + leaf(); break;
          case 2: f = leaf() + " & " + leaf(); break;
          default: f = "(" + leaf() + " | !" + leaf() + ")"; break;
        }
        text += "  multiplex " + name + ": " + f + ";\n";
        names += (names.empty() ? "" : ", ") + name;
        ++nmux;
      }
      if (k > 0) targets += "  target x" + std::to_string(v) + " <- " + names + ";\n";
      for (int j = 0; j < (1 << k); ++j) valuations *= static_cast<std::uint64_t>(bounds[v] + 1);
    }
    text += targets + "}\n";
    if (valuations <= shape.max_valuations) return text;
  }
}

inline Network random_network(std::mt19937& rng, const NetworkShape& shape = {}) {
  return parse_network(random_network_text(rng, shape));
}

inline TermPtr random_term(std::mt19937& rng, const Network& net, int depth) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  switch (depth > 0 ? uniform(0, 4) : uniform(0, 2)) {
    case 0: return constant(uniform(0, 2));
    case 1: return var_term(uniform(0, static_cast<int>(net.variable_count()) - 1));
    case 2: return param_term(uniform(0, static_cast<int>(net.param_count()) - 1));
    case 3: return plus(random_term(rng, net, depth - 1), random_term(rng, net, depth - 1));
    default: return minus(random_term(rng, net, depth - 1), random_term(rng, net, depth - 1));
  }
}

inline AssertionPtr random_assertion(std::mt19937& rng, const Network& net, int depth) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int pick = depth > 0 ? uniform(0, 5) : 0;
  switch (pick) {
    case 0:
    case 1:
      return atom(static_cast<Cmp>(uniform(0, 4)), random_term(rng, net, 1), random_term(rng, net, 1));
    case 2: return negate(random_assertion(rng, net, depth - 1));
    case 3: return conj({random_assertion(rng, net, depth - 1), random_assertion(rng, net, depth - 1)});
    case 4: return disj({random_assertion(rng, net, depth - 1), random_assertion(rng, net, depth - 1)});
    default:
      return implies(random_assertion(rng, net, depth - 1), random_assertion(rng, net, depth - 1));
  }
}

/// Simple state predicate for assert/if guards and postconditions.
inline AssertionPtr random_state_predicate(std::mt19937& rng, const Network& net) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int v = uniform(0, static_cast<int>(net.variable_count()) - 1);
  AssertionPtr a = atom(static_cast<Cmp>(uniform(0, 4)), var_term(v),
                        constant(uniform(0, net.variable(v).bound)));
  if (uniform(0, 2) == 0) {
    const int u = uniform(0, static_cast<int>(net.variable_count()) - 1);
    a = conj({a, atom(Cmp::Ge, var_term(u), constant(uniform(0, net.variable(u).bound)))});
  }
  return a;
}

/// Loop-free program of nesting depth <= depth.
inline ProgramPtr random_program(std::mt19937& rng, const Network& net, int depth) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int nv = static_cast<int>(net.variable_count());
  const int pick = depth > 0 ? uniform(0, 9) : uniform(0, 4);
  switch (pick) {
    case 0:
    case 1: return inc(uniform(0, nv - 1));
    case 2: return dec(uniform(0, nv - 1));
    case 3: {
      const int v = uniform(0, nv - 1);
      return assign(v, uniform(0, net.variable(v).bound));
    }
    case 4: return assert_program(random_state_predicate(rng, net));
    case 5:
    case 6: {
      std::vector<ProgramPtr> parts;
      const int n = uniform(2, 3);
      for (int i = 0; i < n; ++i) parts.push_back(random_program(rng, net, depth - 1));
      return sequence(parts);
    }
    case 7:
    case 8: {
      std::vector<ProgramPtr> branches;
      const int n = uniform(2, 3);
      for (int i = 0; i < n; ++i) {
        branches.push_back(uniform(0, 5) == 0 ? epsilon() : random_program(rng, net, depth - 1));
      }
      return pick == 7 ? forall(std::move(branches)) : exists(std::move(branches));
    }
    default:
      return if_then_else(random_state_predicate(rng, net), random_program(rng, net, depth - 1),
                          random_program(rng, net, depth - 1));
  }
}


/// Assertion stored under tests/data (e.g. "q3").
inline AssertionPtr data_assertion(const Network& net, const std::string& name) {
  return parse_assertion(net, read_file(std::string(GRNHOARE_TEST_DATA_DIR) + "/" + name + ".assert"));
}

/// Valuation with every parameter at `fill`, overridden by printed names.
inline Valuation make_valuation(const Network& net, int fill,
                                const std::vector<std::pair<std::string, int>>& overrides) {
  Valuation k{std::vector<int>(net.param_count(), fill)};
  for (const auto& [name, value] : overrides) k.values[param(net, name)] = value;
  return k;
}

}  // namespace grnhoare::testing
