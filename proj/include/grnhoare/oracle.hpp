#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "grnhoare/assertion.hpp"
#include "grnhoare/error.hpp"
#include "grnhoare/network.hpp"
#include "grnhoare/program.hpp"

namespace grnhoare {

using StateIndex = std::uint32_t;
using StateSet = std::vector<StateIndex>;  // sorted, unique, nonempty

/// The asynchronous state graph of one valuation, with focal levels cached
/// per state.
class StateGraph {
 public:
  StateGraph(const Network& net, Valuation k) : net_(net), k_(std::move(k)) {
    const std::uint64_t n = net.state_count();
    if (n > UINT32_MAX) throw Error(ErrorCode::SizeLimitExceeded, "state space too large");
    const std::size_t nv = net.variable_count();
    focal_.resize(n * nv);
    stride_.assign(nv, 1);
    for (std::size_t v = nv; v-- > 1;) {
      stride_[v - 1] = stride_[v] * static_cast<StateIndex>(net.variable(v).bound + 1);
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      const State s = net.state_at(i);
      for (std::size_t v = 0; v < nv; ++v) focal_[i * nv + v] = focal_level(net, k_, s, v);
    }
  }

  const Network& network() const { return net_; }
  const Valuation& valuation() const { return k_; }
  StateIndex state_count() const { return static_cast<StateIndex>(net_.state_count()); }

  int level(StateIndex s, std::size_t v) const {
    return static_cast<int>((s / stride_[v]) % static_cast<StateIndex>(net_.variable(v).bound + 1));
  }
  int focal(StateIndex s, std::size_t v) const { return focal_[s * net_.variable_count() + v]; }

  /// Target of the v+ (up) or v- transition, if it is an edge of the graph.
  std::optional<StateIndex> step(StateIndex s, std::size_t v, bool up) const {
    const int cur = level(s, v), target = focal(s, v);
    if (up && target > cur) return s + stride_[v];
    if (!up && target < cur) return s - stride_[v];
    return std::nullopt;
  }

  StateIndex assign(StateIndex s, std::size_t v, int k) const {
    return s - static_cast<StateIndex>(level(s, v)) * stride_[v] +
           static_cast<StateIndex>(k) * stride_[v];
  }

  bool is_stable(StateIndex s) const {
    for (std::size_t v = 0; v < net_.variable_count(); ++v) {
      if (focal(s, v) != level(s, v)) return false;
    }
    return true;
  }

  State state(StateIndex s) const { return net_.state_at(s); }

  bool satisfies(StateIndex s, const Assertion& a) const { return eval_assertion(a, state(s), k_); }

 private:
  const Network& net_;
  Valuation k_;
  std::vector<int> focal_;
  std::vector<StateIndex> stride_;
};

/// Outcome of the path-program relation from one state.
struct RelationResult {
  enum class Status { Sets, Infeasible, FuelExhausted };

  Status status = Status::Infeasible;
  std::vector<StateSet> sets;  // canonical order, deduplicated; only for Sets

  static RelationResult infeasible() { return {}; }
  static RelationResult exhausted() { return {Status::FuelExhausted, {}}; }
  static RelationResult of(std::vector<StateSet> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    if (sets.empty()) return infeasible();
    return {Status::Sets, std::move(sets)};
  }
};

struct OracleLimits {
  std::uint64_t fuel = 256;
  std::uint64_t max_sets = 1'000'000;
};

/// Executable relation eta ~p~> E computed by exhaustive set-of-sets search.
/// Any FuelExhausted below a node makes the node FuelExhausted.
class Oracle {
 public:
  Oracle(const StateGraph& graph, OracleLimits limits = {}) : g_(graph), limits_(limits) {}

  RelationResult rel(const Program& p, StateIndex s) { return rel(p, s, limits_.fuel); }

  RelationResult rel(const Program& p, StateIndex s, std::uint64_t fuel) {
    using K = Program::Kind;
    switch (p.kind) {
      case K::Inc:
      case K::Dec: {
        auto t = g_.step(s, p.variable, p.kind == K::Inc);
        if (!t) return RelationResult::infeasible();
        return RelationResult::of({{*t}});
      }
      case K::Assign: return RelationResult::of({{g_.assign(s, p.variable, p.value)}});
      case K::Assert:
        if (!g_.satisfies(s, *p.cond)) return RelationResult::infeasible();
        return RelationResult::of({{s}});
      case K::Epsilon: return RelationResult::of({{s}});
      case K::If: return rel(*p.body[g_.satisfies(s, *p.cond) ? 0 : 1], s, fuel);
      case K::Seq: return rel_seq(p.body, 0, s, fuel);
      case K::While: return rel_while(p, s, fuel);
      case K::Exists: {
        std::vector<StateSet> out;
        bool exhausted = false;
        for (const auto& b : p.body) {
          RelationResult r = rel(*b, s, fuel);
          if (r.status == RelationResult::Status::FuelExhausted) exhausted = true;
          out.insert(out.end(), r.sets.begin(), r.sets.end());
          check_size(out.size());
        }
        if (exhausted) return RelationResult::exhausted();
        return RelationResult::of(std::move(out));
      }
      case K::Forall: {
        std::vector<RelationResult> branches;
        bool infeasible = false;
        for (const auto& b : p.body) {
          branches.push_back(rel(*b, s, fuel));
          const auto st = branches.back().status;
          if (st == RelationResult::Status::FuelExhausted) return RelationResult::exhausted();
          if (st == RelationResult::Status::Infeasible) infeasible = true;
        }
        if (infeasible) return RelationResult::infeasible();
        std::vector<const std::vector<StateSet>*> choices;
        for (const auto& r : branches) choices.push_back(&r.sets);
        return RelationResult::of(union_product(choices));
      }
    }
    return RelationResult::infeasible();
  }

 private:
  void check_size(std::uint64_t n) const {
    if (n > limits_.max_sets) {
      throw Error(ErrorCode::ResultTooLarge,
                  "oracle result exceeds " + std::to_string(limits_.max_sets) + " sets");
    }
  }

  /// All unions E_1 u ... u E_n with E_i drawn from choices[i].
  std::vector<StateSet> union_product(const std::vector<const std::vector<StateSet>*>& choices) const {
    std::vector<StateSet> acc{{}};
    for (const auto* options : choices) {
      check_size(acc.size() * options->size());
      std::vector<StateSet> next;
      next.reserve(acc.size() * options->size());
      for (const auto& base : acc) {
        for (const auto& e : *options) {
          StateSet merged;
          std::set_union(base.begin(), base.end(), e.begin(), e.end(), std::back_inserter(merged));
          next.push_back(std::move(merged));
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      acc = std::move(next);
    }
    return acc;
  }

  RelationResult rel_seq(const std::vector<ProgramPtr>& parts, std::size_t i, StateIndex s,
                         std::uint64_t fuel) {
    RelationResult head = rel(*parts[i], s, fuel);
    if (i + 1 == parts.size() || head.status != RelationResult::Status::Sets) return head;

    std::map<StateIndex, RelationResult> cont;
    std::vector<StateSet> out;
    bool exhausted = false;
    for (const StateSet& f : head.sets) {
      std::vector<const std::vector<StateSet>*> choices;
      bool feasible = true;
      for (StateIndex e : f) {
        auto it = cont.find(e);
        if (it == cont.end()) it = cont.emplace(e, rel_seq(parts, i + 1, e, fuel)).first;
        if (it->second.status == RelationResult::Status::FuelExhausted) exhausted = true;
        if (it->second.status != RelationResult::Status::Sets) {
          feasible = false;
          break;
        }
        choices.push_back(&it->second.sets);
      }
      if (exhausted) return RelationResult::exhausted();
      if (!feasible) continue;  // this F contributes nothing
      auto unions = union_product(choices);
      out.insert(out.end(), unions.begin(), unions.end());
      check_size(out.size());
    }
    return RelationResult::of(std::move(out));
  }

  RelationResult rel_while(const Program& p, StateIndex s, std::uint64_t fuel) {
    if (!g_.satisfies(s, *p.cond)) return RelationResult::of({{s}});
    if (fuel == 0) return RelationResult::exhausted();
    RelationResult body = rel(*p.body[0], s, fuel - 1);
    if (body.status != RelationResult::Status::Sets) return body;
    std::map<StateIndex, RelationResult> cont;
    std::vector<StateSet> out;
    for (const StateSet& f : body.sets) {
      std::vector<const std::vector<StateSet>*> choices;
      bool feasible = true;
      for (StateIndex e : f) {
        auto it = cont.find(e);
        if (it == cont.end()) it = cont.emplace(e, rel_while(p, e, fuel - 1)).first;
        if (it->second.status == RelationResult::Status::FuelExhausted) return RelationResult::exhausted();
        if (it->second.status != RelationResult::Status::Sets) {
          feasible = false;
          break;
        }
        choices.push_back(&it->second.sets);
      }
      if (!feasible) continue;
      auto unions = union_product(choices);
      out.insert(out.end(), unions.begin(), unions.end());
      check_size(out.size());
    }
    return RelationResult::of(std::move(out));
  }

  const StateGraph& g_;
  OracleLimits limits_;
};

/// Convenience wrapper over Oracle::rel.
inline RelationResult rel(const StateGraph& g, const Program& p, StateIndex s,
                          OracleLimits limits = {}) {
  Oracle o(g, limits);
  return o.rel(p, s);
}

struct TripleVerdict {
  enum class Status { Holds, Fails, Undetermined };

  Status status = Status::Holds;
  std::optional<State> witness;  // Fails: first counterexample state
};

/// True iff some E in the result has every member satisfying q.
inline bool some_set_satisfies(const StateGraph& g, const RelationResult& r, const Assertion& q) {
  std::map<StateIndex, bool> memo;
  for (const StateSet& e : r.sets) {
    bool all = true;
    for (StateIndex s : e) {
      auto it = memo.find(s);
      if (it == memo.end()) it = memo.emplace(s, g.satisfies(s, q)).first;
      if (!it->second) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

/// Hoare-triple satisfaction: every state satisfying pre has some E with
/// every member satisfying post. A definite failure wins over fuel exhaustion.
inline TripleVerdict triple_holds(const StateGraph& g, const HoareTriple& t, OracleLimits limits = {}) {
  Oracle oracle(g, limits);
  bool undetermined = false;
  for (StateIndex s = 0; s < g.state_count(); ++s) {
    if (!g.satisfies(s, *t.pre)) continue;
    RelationResult r = oracle.rel(*t.program, s);
    if (r.status == RelationResult::Status::FuelExhausted) {
      undetermined = true;
      continue;
    }
    if (r.status == RelationResult::Status::Infeasible || !some_set_satisfies(g, r, *t.post)) {
      return {TripleVerdict::Status::Fails, g.state(s)};
    }
  }
  if (undetermined) return {TripleVerdict::Status::Undetermined, std::nullopt};
  return {TripleVerdict::Status::Holds, std::nullopt};
}

}  // namespace grnhoare
