#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grnhoare/assertion.hpp"
#include "grnhoare/network.hpp"
#include "grnhoare/program.hpp"
#include "grnhoare/simplify.hpp"

namespace grnhoare {

// ---------------------------------------------------------------------------
// Characteristic formulas

/// Phi_v^omega for the resource set encoded by `mask` over predecessors(v):
/// conjunction, in predecessor order, of the flattened formula of each member
/// and the negated flattened formula of each non-member. True when v has no
/// predecessors.
inline AssertionPtr phi_omega(const Network& net, std::size_t v, std::uint32_t mask) {
  auto preds = net.predecessors(v);
  std::vector<AssertionPtr> parts;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    AssertionPtr f = from_mux_formula(*net.flattened(preds[i]));
    parts.push_back(mask & (1u << i) ? f : negate(f));
  }
  return conj(std::move(parts));
}

inline AssertionPtr phi_omega(const Network& net, std::size_t v, std::span<const int> omega) {
  std::uint32_t mask = 0;
  try {
    mask = net.resource_mask(v, omega);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotAPredecessorSubset, e.what());
  }
  return phi_omega(net, v, mask);
}

namespace detail {

/// Conjunction over all omega of (Phi_v^omega => K_{v,omega} (op) v).
inline AssertionPtr phi_direction(const Network& net, std::size_t v, Cmp op) {
  const std::uint32_t subsets = 1u << net.predecessors(v).size();
  std::vector<AssertionPtr> clauses;
  clauses.reserve(subsets);
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const int p = static_cast<int>(net.param_index(v, mask));
    clauses.push_back(implies(phi_omega(net, v, mask),
                              atom(op, param_term(p), var_term(static_cast<int>(v)))));
  }
  return conj(std::move(clauses));
}

}  // namespace detail

/// Phi_v^+: v can increase.
inline AssertionPtr phi_plus(const Network& net, std::size_t v) {
  return detail::phi_direction(net, v, Cmp::Gt);
}
/// Phi_v^-: v can decrease.
inline AssertionPtr phi_minus(const Network& net, std::size_t v) {
  return detail::phi_direction(net, v, Cmp::Lt);
}
/// Phi_v^=: v is at its focal level.
inline AssertionPtr phi_eq(const Network& net, std::size_t v) {
  return detail::phi_direction(net, v, Cmp::Eq);
}

// ---------------------------------------------------------------------------
// Weakest preconditions

enum class VcKind { InvariantPreservation, LoopExit };

inline const char* vc_kind_name(VcKind k) {
  return k == VcKind::InvariantPreservation ? "invariant-preservation" : "loop-exit";
}

struct VerificationCondition {
  SourceLoc origin;
  AssertionPtr formula;
  VcKind kind;
};

struct ProofOutcome {
  AssertionPtr wp;
  std::vector<VerificationCondition> vcs;
  bool simplified = false;
};

struct WpOptions {
  bool simplify_each_step = false;
};

/// Rules for a single instruction (Inc, Dec, Assign, Assert).
inline AssertionPtr wp_step(const Network& net, const Program& instr, const AssertionPtr& q) {
  switch (instr.kind) {
    case Program::Kind::Inc:
      return conj({phi_plus(net, instr.variable),
                   substitute(q, instr.variable, plus(var_term(instr.variable), constant(1)))});
    case Program::Kind::Dec:
      return conj({phi_minus(net, instr.variable),
                   substitute(q, instr.variable, minus(var_term(instr.variable), constant(1)))});
    case Program::Kind::Assign: return substitute(q, instr.variable, constant(instr.value));
    case Program::Kind::Assert: return conj({instr.cond, q});
    default: break;
  }
  throw Error(ErrorCode::SyntaxError, "wp_step expects a single instruction");
}

namespace detail {

class WpEngine {
 public:
  WpEngine(const Network& net, WpOptions opts) : net_(net), opts_(opts), simplifier_(net) {}

  /// Backward strategy. VCs are appended depth-first, leftmost-innermost.
  AssertionPtr run(const Program& p, const AssertionPtr& q, std::vector<VerificationCondition>& vcs) {
    AssertionPtr out;
    switch (p.kind) {
      case Program::Kind::Inc:
      case Program::Kind::Dec:
      case Program::Kind::Assign:
      case Program::Kind::Assert: out = wp_step(net_, p, q); break;
      case Program::Kind::Epsilon: out = q; break;
      case Program::Kind::Seq: {
        std::vector<std::vector<VerificationCondition>> parts(p.body.size());
        out = q;
        for (std::size_t i = p.body.size(); i-- > 0;) out = run(*p.body[i], out, parts[i]);
        for (auto& part : parts) vcs.insert(vcs.end(), part.begin(), part.end());
        return out;
      }
      case Program::Kind::Forall:
      case Program::Kind::Exists: {
        std::vector<AssertionPtr> branches;
        for (const auto& b : p.body) branches.push_back(run(*b, q, vcs));
        out = p.kind == Program::Kind::Forall ? conj(std::move(branches)) : disj(std::move(branches));
        break;
      }
      case Program::Kind::If: {
        AssertionPtr then_wp = run(*p.body[0], q, vcs);
        AssertionPtr else_wp = run(*p.body[1], q, vcs);
        out = disj({conj({p.cond, then_wp}), conj({negate(p.cond), else_wp})});
        break;
      }
      case Program::Kind::While: {
        AssertionPtr body_wp = run(*p.body[0], p.invariant, vcs);
        AssertionPtr preservation = implies(conj({p.cond, p.invariant}), body_wp);
        AssertionPtr exit = implies(conj({negate(p.cond), p.invariant}), q);
        if (opts_.simplify_each_step) {
          preservation = simplifier_(preservation);
          exit = simplifier_(exit);
        }
        vcs.push_back({p.loc, preservation, VcKind::InvariantPreservation});
        vcs.push_back({p.loc, exit, VcKind::LoopExit});
        return p.invariant;
      }
    }
    if (opts_.simplify_each_step) out = simplifier_(out);
    return out;
  }

 private:
  const Network& net_;
  WpOptions opts_;
  Simplifier simplifier_;
};

}  // namespace detail

inline ProofOutcome wp(const Network& net, const Program& p, const AssertionPtr& q,
                       WpOptions opts = {}) {
  ProofOutcome out;
  detail::WpEngine engine(net, opts);
  out.wp = engine.run(p, q, out.vcs);
  out.simplified = opts.simplify_each_step;
  return out;
}

struct DerivedTriple {
  ProofOutcome outcome;
  AssertionPtr final_implication;  // P => P0
};

inline DerivedTriple derive_triple(const Network& net, const HoareTriple& t, WpOptions opts = {}) {
  DerivedTriple out;
  out.outcome = wp(net, *t.program, t.post, opts);
  out.final_implication = implies(t.pre, out.outcome.wp);
  return out;
}

}  // namespace grnhoare
