#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grnhoare/error.hpp"

namespace grnhoare {

// ---------------------------------------------------------------------------
// Multiplex formulas

struct MuxFormula;
using MuxFormulaPtr = std::shared_ptr<const MuxFormula>;

/// Propositional formula labelling a multiplex. Atoms are either a variable
/// threshold `v >= s` or a reference to another multiplex.
struct MuxFormula {
  enum class Kind { VarAtom, MuxAtom, Not, And, Or };

  Kind kind;
  int index = -1;     // variable index (VarAtom) or multiplex index (MuxAtom)
  int threshold = 0;  // VarAtom only
  MuxFormulaPtr lhs;
  MuxFormulaPtr rhs;
};

inline MuxFormulaPtr mux_var_atom(int variable, int threshold) {
  return std::make_shared<const MuxFormula>(
      MuxFormula{MuxFormula::Kind::VarAtom, variable, threshold, nullptr, nullptr});
}
inline MuxFormulaPtr mux_ref(int multiplex) {
  return std::make_shared<const MuxFormula>(
      MuxFormula{MuxFormula::Kind::MuxAtom, multiplex, 0, nullptr, nullptr});
}
inline MuxFormulaPtr mux_not(MuxFormulaPtr f) {
  return std::make_shared<const MuxFormula>(
      MuxFormula{MuxFormula::Kind::Not, -1, 0, std::move(f), nullptr});
}
inline MuxFormulaPtr mux_and(MuxFormulaPtr a, MuxFormulaPtr b) {
  return std::make_shared<const MuxFormula>(
      MuxFormula{MuxFormula::Kind::And, -1, 0, std::move(a), std::move(b)});
}
inline MuxFormulaPtr mux_or(MuxFormulaPtr a, MuxFormulaPtr b) {
  return std::make_shared<const MuxFormula>(
      MuxFormula{MuxFormula::Kind::Or, -1, 0, std::move(a), std::move(b)});
}

inline bool structurally_equal(const MuxFormula& a, const MuxFormula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case MuxFormula::Kind::VarAtom:
      return a.index == b.index && a.threshold == b.threshold;
    case MuxFormula::Kind::MuxAtom:
      return a.index == b.index;
    case MuxFormula::Kind::Not:
      return structurally_equal(*a.lhs, *b.lhs);
    case MuxFormula::Kind::And:
    case MuxFormula::Kind::Or:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

inline bool is_flat(const MuxFormula& f) {
  switch (f.kind) {
    case MuxFormula::Kind::VarAtom: return true;
    case MuxFormula::Kind::MuxAtom: return false;
    case MuxFormula::Kind::Not: return is_flat(*f.lhs);
    default: return is_flat(*f.lhs) && is_flat(*f.rhs);
  }
}

// ---------------------------------------------------------------------------
// Raw (unvalidated) network description, as produced by the parser.

struct RawMuxFormula;
using RawMuxFormulaPtr = std::shared_ptr<const RawMuxFormula>;

struct RawMuxFormula {
  enum class Kind { Threshold, Reference, Not, And, Or };

  Kind kind;
  std::string name;
  long threshold = 0;
  RawMuxFormulaPtr lhs;
  RawMuxFormulaPtr rhs;
};

struct RawParam {
  std::string variable;
  std::vector<std::string> resources;
  long value = 0;
};

struct RawNetwork {
  std::vector<std::pair<std::string, long>> variables;
  std::vector<std::pair<std::string, RawMuxFormulaPtr>> multiplexes;
  std::vector<std::pair<std::string, std::vector<std::string>>> targets;
  std::vector<RawParam> params;
};

// ---------------------------------------------------------------------------
// States, parameter symbols and valuations

/// Level of every variable, indexed in declaration order.
struct State {
  std::vector<int> levels;

  int operator[](std::size_t v) const { return levels[v]; }
  std::size_t size() const { return levels.size(); }
  State with(std::size_t v, int level) const {
    State copy = *this;
    copy.levels[v] = level;
    return copy;
  }
  auto operator<=>(const State&) const = default;
};

/// K_{v,omega}: `resources` holds multiplex indices sorted by multiplex name.
struct ParamSymbol {
  int variable = -1;
  std::vector<int> resources;

  auto operator<=>(const ParamSymbol&) const = default;
};

/// Value of every parameter symbol, indexed by the network's canonical
/// parameter order.
struct Valuation {
  std::vector<int> values;

  int operator[](std::size_t p) const { return values[p]; }
  std::size_t size() const { return values.size(); }
  auto operator<=>(const Valuation&) const = default;
};

// ---------------------------------------------------------------------------

struct Variable {
  std::string name;
  int bound = 1;
};

struct Multiplex {
  std::string name;
  MuxFormulaPtr formula;
};

/// A validated gene regulatory network with multiplexes. Immutable.
///
/// Canonical orders: variables and multiplexes keep declaration order, the
/// predecessors of a variable are sorted by multiplex name, and parameter
/// symbols are grouped by variable with resource sets enumerated as a binary
/// counter over the sorted predecessor list (bit i <=> predecessor i).
class Network {
 public:
  std::size_t variable_count() const { return variables_.size(); }
  const Variable& variable(std::size_t v) const { return variables_.at(v); }
  const std::vector<Variable>& variables() const { return variables_; }

  std::size_t multiplex_count() const { return multiplexes_.size(); }
  const Multiplex& multiplex(std::size_t m) const { return multiplexes_.at(m); }

  /// Flattened formula of multiplex m (only variable atoms).
  const MuxFormulaPtr& flattened(std::size_t m) const { return flattened_.at(m); }

  /// N^-1(v), sorted by multiplex name.
  std::span<const int> predecessors(std::size_t v) const { return predecessors_.at(v); }

  /// Variables referenced directly by multiplex m (edges of E_V).
  std::span<const int> input_variables(std::size_t m) const { return input_vars_.at(m); }
  /// Multiplexes referenced directly by multiplex m.
  std::span<const int> input_multiplexes(std::size_t m) const { return input_muxes_.at(m); }

  std::optional<int> find_variable(const std::string& name) const {
    auto it = var_by_name_.find(name);
    if (it == var_by_name_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_multiplex(const std::string& name) const {
    auto it = mux_by_name_.find(name);
    if (it == mux_by_name_.end()) return std::nullopt;
    return it->second;
  }
  int variable_index(const std::string& name) const {
    if (auto v = find_variable(name)) return *v;
    throw Error(ErrorCode::UnknownVariable, "unknown variable '" + name + "'");
  }

  std::size_t param_count() const { return params_.size(); }
  const ParamSymbol& param(std::size_t p) const { return params_.at(p); }
  std::size_t param_index(std::size_t v, std::uint32_t mask) const {
    return param_offset_.at(v) + mask;
  }
  std::uint32_t param_mask(std::size_t p) const {
    return static_cast<std::uint32_t>(p - param_offset_.at(params_.at(p).variable));
  }

  /// Bit mask of a resource set with respect to predecessors(v); throws
  /// ParamIndexNotSubsetOfPredecessors if some member is not a predecessor.
  std::uint32_t resource_mask(std::size_t v, std::span<const int> resources) const {
    std::uint32_t mask = 0;
    auto preds = predecessors(v);
    for (int m : resources) {
      auto it = std::find(preds.begin(), preds.end(), m);
      if (it == preds.end()) {
        throw Error(ErrorCode::ParamIndexNotSubsetOfPredecessors,
                    "multiplex '" + multiplexes_.at(m).name + "' is not a predecessor of '" +
                        variables_.at(v).name + "'");
      }
      mask |= 1u << static_cast<unsigned>(it - preds.begin());
    }
    return mask;
  }

  /// Multiplex indices (name-sorted) selected by a resource mask.
  std::vector<int> resources_of_mask(std::size_t v, std::uint32_t mask) const {
    std::vector<int> out;
    auto preds = predecessors(v);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (mask & (1u << i)) out.push_back(preds[i]);
    }
    return out;
  }

  /// User-pinned value of parameter p, if any.
  std::optional<int> fixed_param(std::size_t p) const { return fixed_.at(p); }

  /// Printed form `K[v,{m1,m2}]`.
  std::string param_name(std::size_t p) const {
    const ParamSymbol& sym = params_.at(p);
    std::string out = "K[" + variables_.at(sym.variable).name + ",{";
    for (std::size_t i = 0; i < sym.resources.size(); ++i) {
      if (i) out += ',';
      out += multiplexes_.at(sym.resources[i]).name;
    }
    return out + "}]";
  }

  std::uint64_t state_count() const {
    std::uint64_t n = 1;
    for (const auto& var : variables_) n *= static_cast<std::uint64_t>(var.bound + 1);
    return n;
  }

  /// Mixed-radix decoding; the first variable is the most significant digit so
  /// that index order is lexicographic order.
  State state_at(std::uint64_t index) const {
    State s{std::vector<int>(variables_.size(), 0)};
    for (std::size_t i = variables_.size(); i-- > 0;) {
      const auto radix = static_cast<std::uint64_t>(variables_[i].bound + 1);
      s.levels[i] = static_cast<int>(index % radix);
      index /= radix;
    }
    return s;
  }

  std::uint64_t state_index(const State& s) const {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      index = index * static_cast<std::uint64_t>(variables_[i].bound + 1) +
              static_cast<std::uint64_t>(s.levels[i]);
    }
    return index;
  }

  bool is_valid_state(const State& s) const {
    if (s.size() != variables_.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] > variables_[i].bound) return false;
    }
    return true;
  }

  friend Network validate_network(const RawNetwork& raw);

 private:
  std::vector<Variable> variables_;
  std::vector<Multiplex> multiplexes_;
  std::vector<MuxFormulaPtr> flattened_;
  std::vector<std::vector<int>> predecessors_;
  std::vector<std::vector<int>> input_vars_;
  std::vector<std::vector<int>> input_muxes_;
  std::vector<ParamSymbol> params_;
  std::vector<std::size_t> param_offset_;
  std::vector<std::optional<int>> fixed_;
  std::map<std::string, int> var_by_name_;
  std::map<std::string, int> mux_by_name_;
};

namespace detail {

inline void collect_inputs(const MuxFormula& f, std::vector<int>& vars, std::vector<int>& muxes) {
  switch (f.kind) {
    case MuxFormula::Kind::VarAtom: vars.push_back(f.index); break;
    case MuxFormula::Kind::MuxAtom: muxes.push_back(f.index); break;
    case MuxFormula::Kind::Not: collect_inputs(*f.lhs, vars, muxes); break;
    default:
      collect_inputs(*f.lhs, vars, muxes);
      collect_inputs(*f.rhs, vars, muxes);
  }
}

inline void sort_unique(std::vector<int>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

inline MuxFormulaPtr substitute_multiplexes(const MuxFormulaPtr& f,
                                            const std::vector<MuxFormulaPtr>& flat) {
  switch (f->kind) {
    case MuxFormula::Kind::VarAtom: return f;
    case MuxFormula::Kind::MuxAtom: return flat.at(f->index);
    case MuxFormula::Kind::Not: return mux_not(substitute_multiplexes(f->lhs, flat));
    case MuxFormula::Kind::And:
      return mux_and(substitute_multiplexes(f->lhs, flat), substitute_multiplexes(f->rhs, flat));
    case MuxFormula::Kind::Or:
      return mux_or(substitute_multiplexes(f->lhs, flat), substitute_multiplexes(f->rhs, flat));
  }
  return f;
}

}  // namespace detail

/// Resolves names, checks every structural invariant, derives edges and
/// flattened formulas, and builds the canonical parameter index.
inline Network validate_network(const RawNetwork& raw) {
  Network net;

  for (const auto& [name, bound] : raw.variables) {
    if (net.var_by_name_.count(name)) {
      throw Error(ErrorCode::DuplicateName, "duplicate variable '" + name + "'");
    }
    if (bound < 1) {
      throw Error(ErrorCode::SyntaxError,
                  "bound of variable '" + name + "' must be a positive integer");
    }
    net.var_by_name_[name] = static_cast<int>(net.variables_.size());
    net.variables_.push_back({name, static_cast<int>(bound)});
  }
  for (const auto& [name, formula] : raw.multiplexes) {
    if (net.var_by_name_.count(name) || net.mux_by_name_.count(name)) {
      throw Error(ErrorCode::DuplicateName, "duplicate name '" + name + "'");
    }
    net.mux_by_name_[name] = static_cast<int>(net.mux_by_name_.size());
  }

  // Resolve multiplex formulas.
  auto resolve = [&](auto&& self, const RawMuxFormula& f) -> MuxFormulaPtr {
    switch (f.kind) {
      case RawMuxFormula::Kind::Threshold: {
        auto v = net.find_variable(f.name);
        if (!v) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + f.name + "'");
        const int bound = net.variables_[*v].bound;
        if (f.threshold < 1 || f.threshold > bound) {
          throw Error(ErrorCode::ThresholdOutOfRange,
                      "threshold " + std::to_string(f.threshold) + " of '" + f.name +
                          "' is outside [1," + std::to_string(bound) + "]");
        }
        return mux_var_atom(*v, static_cast<int>(f.threshold));
      }
      case RawMuxFormula::Kind::Reference: {
        auto m = net.find_multiplex(f.name);
        if (!m) throw Error(ErrorCode::UnknownName, "unknown multiplex '" + f.name + "'");
        return mux_ref(*m);
      }
      case RawMuxFormula::Kind::Not: return mux_not(self(self, *f.lhs));
      case RawMuxFormula::Kind::And: return mux_and(self(self, *f.lhs), self(self, *f.rhs));
      case RawMuxFormula::Kind::Or: return mux_or(self(self, *f.lhs), self(self, *f.rhs));
    }
    throw Error(ErrorCode::SyntaxError, "malformed multiplex formula");
  };
  for (const auto& [name, formula] : raw.multiplexes) {
    MuxFormulaPtr resolved = resolve(resolve, *formula);
    std::vector<int> vars, muxes;
    detail::collect_inputs(*resolved, vars, muxes);
    detail::sort_unique(vars);
    detail::sort_unique(muxes);
    net.multiplexes_.push_back({name, std::move(resolved)});
    net.input_vars_.push_back(std::move(vars));
    net.input_muxes_.push_back(std::move(muxes));
  }

  // The multiplex-only subgraph must be acyclic; flatten in post-order.
  const std::size_t nmux = net.multiplexes_.size();
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(nmux, Mark::White);
  net.flattened_.assign(nmux, nullptr);
  auto visit = [&](auto&& self, int m) -> void {
    if (mark[m] == Mark::Black) return;
    if (mark[m] == Mark::Grey) {
      throw Error(ErrorCode::MultiplexCycle,
                  "multiplex '" + net.multiplexes_[m].name + "' lies on a multiplex-only cycle");
    }
    mark[m] = Mark::Grey;
    for (int dep : net.input_muxes_[m]) self(self, dep);
    net.flattened_[m] = detail::substitute_multiplexes(net.multiplexes_[m].formula, net.flattened_);
    mark[m] = Mark::Black;
  };
  for (std::size_t m = 0; m < nmux; ++m) visit(visit, static_cast<int>(m));

  // Targets: N^-1(v).
  net.predecessors_.assign(net.variables_.size(), {});
  for (const auto& [var, muxes] : raw.targets) {
    const int v = net.variable_index(var);
    for (const auto& mname : muxes) {
      auto m = net.find_multiplex(mname);
      if (!m) throw Error(ErrorCode::UnknownName, "unknown multiplex '" + mname + "'");
      net.predecessors_[v].push_back(*m);
    }
  }
  for (auto& preds : net.predecessors_) {
    std::sort(preds.begin(), preds.end(), [&](int x, int y) {
      return net.multiplexes_[x].name < net.multiplexes_[y].name;
    });
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    if (preds.size() > 20) {
      throw Error(ErrorCode::SizeLimitExceeded, "a variable has more than 20 predecessors");
    }
  }

  // Parameter symbols.
  for (std::size_t v = 0; v < net.variables_.size(); ++v) {
    net.param_offset_.push_back(net.params_.size());
    const std::uint32_t subsets = 1u << net.predecessors_[v].size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      net.params_.push_back({static_cast<int>(v), net.resources_of_mask(v, mask)});
    }
  }
  net.fixed_.assign(net.params_.size(), std::nullopt);
  for (const auto& param : raw.params) {
    const int v = net.variable_index(param.variable);
    std::vector<int> res;
    for (const auto& mname : param.resources) {
      auto m = net.find_multiplex(mname);
      if (!m) throw Error(ErrorCode::UnknownName, "unknown multiplex '" + mname + "'");
      res.push_back(*m);
    }
    const std::size_t p = net.param_index(v, net.resource_mask(v, res));
    if (param.value < 0 || param.value > net.variables_[v].bound) {
      throw Error(ErrorCode::ParamOutOfBounds,
                  net.param_name(p) + " = " + std::to_string(param.value) + " is outside [0," +
                      std::to_string(net.variables_[v].bound) + "]");
    }
    if (net.fixed_[p] && *net.fixed_[p] != param.value) {
      throw Error(ErrorCode::DuplicateName, "conflicting values for " + net.param_name(p));
    }
    net.fixed_[p] = static_cast<int>(param.value);
  }
  return net;
}

// ---------------------------------------------------------------------------
// Dynamics

inline bool holds(const MuxFormula& f, const State& s) {
  switch (f.kind) {
    case MuxFormula::Kind::VarAtom: return s[f.index] >= f.threshold;
    case MuxFormula::Kind::MuxAtom:
      throw Error(ErrorCode::UnknownSymbol, "cannot evaluate an unflattened multiplex atom");
    case MuxFormula::Kind::Not: return !holds(*f.lhs, s);
    case MuxFormula::Kind::And: return holds(*f.lhs, s) && holds(*f.rhs, s);
    case MuxFormula::Kind::Or: return holds(*f.lhs, s) || holds(*f.rhs, s);
  }
  return false;
}

inline const MuxFormulaPtr& flatten(const Network& net, std::size_t m) { return net.flattened(m); }

/// Bit mask (over predecessors(v)) of rho(state, v).
inline std::uint32_t resource_mask(const Network& net, const State& s, std::size_t v) {
  if (v >= net.variable_count()) {
    throw Error(ErrorCode::UnknownVariable, "variable index out of range");
  }
  std::uint32_t mask = 0;
  auto preds = net.predecessors(v);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (holds(*net.flattened(preds[i]), s)) mask |= 1u << i;
  }
  return mask;
}

/// rho(state, v): multiplex indices sorted by name.
inline std::vector<int> resources(const Network& net, const State& s, std::size_t v) {
  return net.resources_of_mask(v, resource_mask(net, s, v));
}

/// K_{v, rho(state, v)}.
inline int focal_level(const Network& net, const Valuation& k, const State& s, std::size_t v) {
  return k[net.param_index(v, resource_mask(net, s, v))];
}

inline bool is_stable(const Network& net, const Valuation& k, const State& s) {
  for (std::size_t v = 0; v < net.variable_count(); ++v) {
    if (focal_level(net, k, s, v) != s[v]) return false;
  }
  return true;
}

/// Asynchronous successors. A stable state is its own unique successor;
/// otherwise every unstable variable moves one step toward its focal level.
inline std::vector<State> successors(const Network& net, const Valuation& k, const State& s) {
  std::vector<State> out;
  for (std::size_t v = 0; v < net.variable_count(); ++v) {
    const int target = focal_level(net, k, s, v);
    if (target > s[v]) out.push_back(s.with(v, s[v] + 1));
    if (target < s[v]) out.push_back(s.with(v, s[v] - 1));
  }
  if (out.empty()) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

/// All states in lexicographic order of the declared variables.
inline std::vector<State> enumerate_states(const Network& net) {
  std::vector<State> out;
  const std::uint64_t n = net.state_count();
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(net.state_at(i));
  return out;
}

}  // namespace grnhoare
