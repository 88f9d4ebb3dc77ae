#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "grnhoare/assertion.hpp"
#include "grnhoare/network.hpp"

namespace grnhoare {

// ---------------------------------------------------------------------------
// Linear view of terms

struct SymbolRef {
  bool is_param = false;
  int index = -1;

  auto operator<=>(const SymbolRef&) const = default;
};

struct LinearForm {
  std::map<SymbolRef, std::int64_t> coeffs;
  std::int64_t constant = 0;

  void add(const LinearForm& other, std::int64_t sign) {
    constant += sign * other.constant;
    for (const auto& [sym, c] : other.coeffs) {
      auto& slot = coeffs[sym];
      slot += sign * c;
      if (slot == 0) coeffs.erase(sym);
    }
  }
};

inline LinearForm linearize(const Term& t) {
  LinearForm out;
  switch (t.kind) {
    case Term::Kind::Const: out.constant = t.value; break;
    case Term::Kind::Var: out.coeffs[{false, t.index}] = 1; break;
    case Term::Kind::Param: out.coeffs[{true, t.index}] = 1; break;
    case Term::Kind::Plus:
    case Term::Kind::Minus:
      out = linearize(*t.lhs);
      out.add(linearize(*t.rhs), t.kind == Term::Kind::Plus ? 1 : -1);
      break;
  }
  return out;
}

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool empty() const { return lo > hi; }
  Interval meet(Interval other) const {
    return {std::max(lo, other.lo), std::min(hi, other.hi)};
  }
  bool operator==(const Interval&) const = default;
};

/// Known ranges of symbols, on top of the boundary axioms.
using SymbolContext = std::map<SymbolRef, Interval>;

/// Simplification of assertions by boundary-axiom interval reasoning and
/// Boolean constant propagation. The result is equivalent to the input for
/// every in-bounds (state, valuation) pair.
class Simplifier {
 public:
  explicit Simplifier(const Network& net) : net_(net) {}

  AssertionPtr operator()(const AssertionPtr& a) { return simplify(a, {}); }

  AssertionPtr simplify(const AssertionPtr& a, const SymbolContext& ctx) {
    switch (a->kind) {
      case Assertion::Kind::True:
      case Assertion::Kind::False: return a;
      case Assertion::Kind::Atom: return simplify_atom(*a, ctx);
      case Assertion::Kind::Not: return simplify(push_negation(a->args[0]), ctx);
      case Assertion::Kind::And: return simplify_and(a, ctx);
      case Assertion::Kind::Or: return simplify_or(a, ctx);
      case Assertion::Kind::Implies: return simplify_implies(*a, ctx);
    }
    return a;
  }

  Interval bounds(SymbolRef sym) const {
    const int var = sym.is_param ? net_.param(sym.index).variable : sym.index;
    return {0, net_.variable(var).bound};
  }

  Interval range(SymbolRef sym, const SymbolContext& ctx) const {
    Interval r = bounds(sym);
    if (auto it = ctx.find(sym); it != ctx.end()) r = r.meet(it->second);
    return r;
  }

  /// Single-symbol facts implied by `a` (conjunctions of single-symbol atoms).
  void collect_facts(const Assertion& a, SymbolContext& out) const {
    if (a.kind == Assertion::Kind::And) {
      for (const auto& x : a.args) collect_facts(*x, out);
      return;
    }
    if (a.kind != Assertion::Kind::Atom) return;
    LinearForm lf = linearize(*a.lhs);
    lf.add(linearize(*a.rhs), -1);
    if (lf.coeffs.size() != 1) return;
    const auto [sym, c] = *lf.coeffs.begin();
    if (auto allowed = allowed_values(sym, c, lf.constant, a.op, bounds(sym))) {
      auto [it, inserted] = out.emplace(sym, *allowed);
      if (!inserted) it->second = it->second.meet(*allowed);
    }
  }

 private:
  static constexpr std::int64_t kScanLimit = 4096;

  static Cmp flip(Cmp op) {
    switch (op) {
      case Cmp::Lt: return Cmp::Gt;
      case Cmp::Gt: return Cmp::Lt;
      case Cmp::Le: return Cmp::Ge;
      case Cmp::Ge: return Cmp::Le;
      default: return op;
    }
  }

  /// Values of x in `within` satisfying c*x + k (op) 0, as an interval. The
  /// satisfying set of a one-symbol linear constraint is convex.
  static std::optional<Interval> allowed_values(SymbolRef, std::int64_t c, std::int64_t k, Cmp op,
                                                Interval within) {
    if (within.empty() || within.hi - within.lo > kScanLimit) return std::nullopt;
    Interval out{1, 0};
    for (std::int64_t x = within.lo; x <= within.hi; ++x) {
      if (compare(op, c * x + k, 0)) {
        if (out.empty()) out = {x, x};
        else out.hi = x;
      }
    }
    return out;
  }

  static AssertionPtr push_negation(const AssertionPtr& a) {
    switch (a->kind) {
      case Assertion::Kind::True: return truth(false);
      case Assertion::Kind::False: return truth(true);
      case Assertion::Kind::Atom:
        switch (a->op) {
          case Cmp::Eq: return disj({atom(Cmp::Lt, a->lhs, a->rhs), atom(Cmp::Gt, a->lhs, a->rhs)});
          case Cmp::Lt: return atom(Cmp::Ge, a->lhs, a->rhs);
          case Cmp::Le: return atom(Cmp::Gt, a->lhs, a->rhs);
          case Cmp::Gt: return atom(Cmp::Le, a->lhs, a->rhs);
          case Cmp::Ge: return atom(Cmp::Lt, a->lhs, a->rhs);
        }
        break;
      case Assertion::Kind::Not: return a->args[0];
      case Assertion::Kind::And: {
        std::vector<AssertionPtr> out;
        for (const auto& x : a->args) out.push_back(negate(x));
        return disj(std::move(out));
      }
      case Assertion::Kind::Or: {
        std::vector<AssertionPtr> out;
        for (const auto& x : a->args) out.push_back(negate(x));
        return conj(std::move(out));
      }
      case Assertion::Kind::Implies: return conj({a->args[0], negate(a->args[1])});
    }
    return negate(a);
  }

  TermPtr symbol_term(SymbolRef sym) const {
    return sym.is_param ? param_term(sym.index) : var_term(sym.index);
  }

  TermPtr sum_term(const std::vector<std::pair<SymbolRef, std::int64_t>>& parts,
                   std::int64_t k) const {
    TermPtr out;
    for (const auto& [sym, c] : parts) {
      for (std::int64_t i = 0; i < c; ++i) out = out ? plus(out, symbol_term(sym)) : symbol_term(sym);
    }
    if (k != 0 || !out) out = out ? plus(out, constant(k)) : constant(k);
    return out;
  }

  AssertionPtr simplify_atom(const Assertion& a, const SymbolContext& ctx) const {
    LinearForm lf = linearize(*a.lhs);
    lf.add(linearize(*a.rhs), -1);

    // Pin symbols whose range is a single value.
    for (auto it = lf.coeffs.begin(); it != lf.coeffs.end();) {
      const Interval r = range(it->first, ctx);
      if (r.empty()) return truth(false);
      if (r.lo == r.hi) {
        lf.constant += it->second * r.lo;
        it = lf.coeffs.erase(it);
      } else {
        ++it;
      }
    }

    std::int64_t lo = lf.constant, hi = lf.constant;
    for (const auto& [sym, c] : lf.coeffs) {
      const Interval r = range(sym, ctx);
      lo += c > 0 ? c * r.lo : c * r.hi;
      hi += c > 0 ? c * r.hi : c * r.lo;
    }
    switch (a.op) {
      case Cmp::Eq:
        if (lo == 0 && hi == 0) return truth(true);
        if (lo > 0 || hi < 0) return truth(false);
        break;
      case Cmp::Lt:
        if (hi < 0) return truth(true);
        if (lo >= 0) return truth(false);
        break;
      case Cmp::Le:
        if (hi <= 0) return truth(true);
        if (lo > 0) return truth(false);
        break;
      case Cmp::Gt:
        if (lo > 0) return truth(true);
        if (hi <= 0) return truth(false);
        break;
      case Cmp::Ge:
        if (lo >= 0) return truth(true);
        if (hi < 0) return truth(false);
        break;
    }

    if (lf.coeffs.size() == 1) {
      const auto [sym, c] = *lf.coeffs.begin();
      const Interval r = range(sym, ctx);
      if (auto allowed = allowed_values(sym, c, lf.constant, a.op, r)) {
        if (allowed->empty()) return truth(false);
        if (*allowed == r) return truth(true);
        const TermPtr x = symbol_term(sym);
        if (allowed->lo == allowed->hi) return atom(Cmp::Eq, x, constant(allowed->lo));
        if (allowed->lo == r.lo) return atom(Cmp::Lt, x, constant(allowed->hi + 1));
        if (allowed->hi == r.hi) return atom(Cmp::Ge, x, constant(allowed->lo));
        return conj({atom(Cmp::Ge, x, constant(allowed->lo)),
                     atom(Cmp::Lt, x, constant(allowed->hi + 1))});
      }
    }

    // Canonical multi-symbol atom: positive part + k (op) negative part.
    std::vector<std::pair<SymbolRef, std::int64_t>> pos, neg;
    for (const auto& [sym, c] : lf.coeffs) {
      if (c > 0) pos.emplace_back(sym, c);
      else neg.emplace_back(sym, -c);
    }
    if (pos.empty() && !neg.empty()) {
      std::swap(pos, neg);
      lf.constant = -lf.constant;
      return atom(flip(a.op), sum_term(pos, std::max<std::int64_t>(lf.constant, 0)),
                  sum_term(neg, std::max<std::int64_t>(-lf.constant, 0)));
    }
    return atom(a.op, sum_term(pos, std::max<std::int64_t>(lf.constant, 0)),
                sum_term(neg, std::max<std::int64_t>(-lf.constant, 0)));
  }

  static void flatten_into(Assertion::Kind kind, const AssertionPtr& a,
                           std::vector<AssertionPtr>& out) {
    if (a->kind == kind) {
      for (const auto& x : a->args) flatten_into(kind, x, out);
    } else {
      out.push_back(a);
    }
  }

  static void dedupe(std::vector<AssertionPtr>& xs) {
    std::vector<AssertionPtr> out;
    for (auto& x : xs) {
      bool seen = false;
      for (const auto& y : out) {
        if (structurally_equal(*x, *y)) {
          seen = true;
          break;
        }
      }
      if (!seen) out.push_back(std::move(x));
    }
    xs = std::move(out);
  }

  AssertionPtr simplify_and(const AssertionPtr& a, const SymbolContext& ctx) {
    std::vector<AssertionPtr> parts;
    flatten_into(Assertion::Kind::And, a, parts);

    for (int pass = 0; pass < 4; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        // Each conjunct may be simplified under the facts of its siblings.
        SymbolContext local = ctx;
        for (std::size_t j = 0; j < parts.size(); ++j) {
          if (j != i) collect_facts(*parts[j], local);
        }
        for (auto& [sym, r] : local) {
          if (r.meet(bounds(sym)).empty()) return truth(false);
        }
        AssertionPtr next = simplify(parts[i], local);
        if (next->kind == Assertion::Kind::False) return next;
        if (!structurally_equal(*next, *parts[i])) {
          parts[i] = std::move(next);
          changed = true;
        }
      }
      std::vector<AssertionPtr> flat;
      for (const auto& p : parts) {
        if (p->kind != Assertion::Kind::True) flatten_into(Assertion::Kind::And, p, flat);
      }
      const std::size_t before = flat.size();
      dedupe(flat);
      changed |= flat.size() != parts.size() || flat.size() != before;
      parts = std::move(flat);
      if (!changed) break;
    }
    return conj(std::move(parts));
  }

  AssertionPtr simplify_or(const AssertionPtr& a, const SymbolContext& ctx) {
    std::vector<AssertionPtr> parts, flat;
    flatten_into(Assertion::Kind::Or, a, parts);
    for (const auto& p : parts) {
      AssertionPtr next = simplify(p, ctx);
      if (next->kind == Assertion::Kind::True) return next;
      if (next->kind != Assertion::Kind::False) flatten_into(Assertion::Kind::Or, next, flat);
    }
    dedupe(flat);
    return disj(std::move(flat));
  }

  AssertionPtr simplify_implies(const Assertion& a, const SymbolContext& ctx) {
    AssertionPtr guard = simplify(a.args[0], ctx);
    if (guard->kind == Assertion::Kind::False) return truth(true);
    if (guard->kind == Assertion::Kind::True) return simplify(a.args[1], ctx);
    SymbolContext local = ctx;
    collect_facts(*guard, local);
    for (auto& [sym, r] : local) {
      if (r.meet(bounds(sym)).empty()) return truth(true);
    }
    AssertionPtr body = simplify(a.args[1], local);
    if (body->kind == Assertion::Kind::True) return body;
    if (body->kind == Assertion::Kind::False) return simplify(negate(guard), ctx);
    return implies(std::move(guard), std::move(body));
  }

  const Network& net_;
};

inline AssertionPtr simplify(const Network& net, const AssertionPtr& a) {
  Simplifier s(net);
  return s(a);
}

// ---------------------------------------------------------------------------
// Finite-domain deciders

/// True iff `a` holds at every state of the network under valuation `k`.
inline bool check_validity(const Network& net, const Assertion& a, const Valuation& k) {
  const std::uint64_t n = net.state_count();
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!eval_assertion(a, net.state_at(i), k)) return false;
  }
  return true;
}

/// First state (canonical order) at which `a` fails under `k`.
inline std::optional<State> find_counterexample(const Network& net, const Assertion& a,
                                                const Valuation& k) {
  const std::uint64_t n = net.state_count();
  for (std::uint64_t i = 0; i < n; ++i) {
    State s = net.state_at(i);
    if (!eval_assertion(a, s, k)) return s;
  }
  return std::nullopt;
}

inline constexpr std::uint64_t kDefaultSearchCap = std::uint64_t{1} << 24;

/// Searches for an in-bounds (state, valuation) pair satisfying `a`. Only the
/// symbols occurring in `a` are enumerated; all others are left at 0.
inline std::optional<std::pair<State, Valuation>> find_model(
    const Network& net, const Assertion& a, std::uint64_t cap = kDefaultSearchCap) {
  SymbolSet syms;
  collect_symbols(a, syms);
  std::vector<SymbolRef> order;
  std::vector<std::int64_t> radix;
  std::uint64_t total = 1;
  auto push = [&](SymbolRef sym, int bound) {
    order.push_back(sym);
    radix.push_back(bound + 1);
    if (total > cap / static_cast<std::uint64_t>(bound + 1)) {
      throw Error(ErrorCode::SizeLimitExceeded,
                  "satisfiability search space exceeds " + std::to_string(cap));
    }
    total *= static_cast<std::uint64_t>(bound + 1);
  };
  for (int v : syms.variables) push({false, v}, net.variable(v).bound);
  for (int p : syms.params) push({true, p}, net.variable(net.param(p).variable).bound);

  State s{std::vector<int>(net.variable_count(), 0)};
  Valuation k{std::vector<int>(net.param_count(), 0)};
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t rest = i;
    for (std::size_t j = order.size(); j-- > 0;) {
      const int digit = static_cast<int>(rest % static_cast<std::uint64_t>(radix[j]));
      rest /= static_cast<std::uint64_t>(radix[j]);
      if (order[j].is_param) k.values[order[j].index] = digit;
      else s.levels[order[j].index] = digit;
    }
    if (eval_assertion(a, s, k)) return std::make_pair(s, k);
  }
  return std::nullopt;
}

inline bool check_satisfiability(const Network& net, const Assertion& a,
                                 std::uint64_t cap = kDefaultSearchCap) {
  return find_model(net, a, cap).has_value();
}

}  // namespace grnhoare
