#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grnhoare/error.hpp"
#include "grnhoare/network.hpp"

namespace grnhoare {

// ---------------------------------------------------------------------------
// Terms: integers, variable symbols, parameter symbols, + and -.

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Const, Var, Param, Plus, Minus };

  Kind kind;
  std::int64_t value = 0;  // Const
  int index = -1;          // Var: variable index, Param: parameter index
  TermPtr lhs;
  TermPtr rhs;
};

inline TermPtr constant(std::int64_t n) {
  return std::make_shared<const Term>(Term{Term::Kind::Const, n, -1, nullptr, nullptr});
}
inline TermPtr var_term(int v) {
  return std::make_shared<const Term>(Term{Term::Kind::Var, 0, v, nullptr, nullptr});
}
inline TermPtr param_term(int p) {
  return std::make_shared<const Term>(Term{Term::Kind::Param, 0, p, nullptr, nullptr});
}
inline TermPtr plus(TermPtr a, TermPtr b) {
  return std::make_shared<const Term>(Term{Term::Kind::Plus, 0, -1, std::move(a), std::move(b)});
}
inline TermPtr minus(TermPtr a, TermPtr b) {
  return std::make_shared<const Term>(Term{Term::Kind::Minus, 0, -1, std::move(a), std::move(b)});
}

// ---------------------------------------------------------------------------
// Assertions

enum class Cmp { Eq, Lt, Gt, Le, Ge };

inline const char* cmp_text(Cmp op) {
  switch (op) {
    case Cmp::Eq: return "=";
    case Cmp::Lt: return "<";
    case Cmp::Gt: return ">";
    case Cmp::Le: return "<=";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

/// And/Or are n-ary (at least two operands once built through conj/disj);
/// Not has one operand; Implies has exactly two.
struct Assertion {
  enum class Kind { True, False, Atom, Not, And, Or, Implies };

  Kind kind;
  Cmp op = Cmp::Eq;
  TermPtr lhs;
  TermPtr rhs;
  std::vector<AssertionPtr> args;
};

inline AssertionPtr truth(bool value) {
  static const AssertionPtr t =
      std::make_shared<const Assertion>(Assertion{Assertion::Kind::True, Cmp::Eq, nullptr, nullptr, {}});
  static const AssertionPtr f =
      std::make_shared<const Assertion>(Assertion{Assertion::Kind::False, Cmp::Eq, nullptr, nullptr, {}});
  return value ? t : f;
}
inline AssertionPtr atom(Cmp op, TermPtr lhs, TermPtr rhs) {
  return std::make_shared<const Assertion>(
      Assertion{Assertion::Kind::Atom, op, std::move(lhs), std::move(rhs), {}});
}
inline AssertionPtr negate(AssertionPtr a) {
  return std::make_shared<const Assertion>(
      Assertion{Assertion::Kind::Not, Cmp::Eq, nullptr, nullptr, {std::move(a)}});
}
inline AssertionPtr conj(std::vector<AssertionPtr> args) {
  if (args.empty()) return truth(true);
  if (args.size() == 1) return args.front();
  return std::make_shared<const Assertion>(
      Assertion{Assertion::Kind::And, Cmp::Eq, nullptr, nullptr, std::move(args)});
}
inline AssertionPtr disj(std::vector<AssertionPtr> args) {
  if (args.empty()) return truth(false);
  if (args.size() == 1) return args.front();
  return std::make_shared<const Assertion>(
      Assertion{Assertion::Kind::Or, Cmp::Eq, nullptr, nullptr, std::move(args)});
}
inline AssertionPtr implies(AssertionPtr a, AssertionPtr b) {
  return std::make_shared<const Assertion>(
      Assertion{Assertion::Kind::Implies, Cmp::Eq, nullptr, nullptr, {std::move(a), std::move(b)}});
}

/// v >= s as an assertion atom.
inline AssertionPtr threshold_atom(int v, std::int64_t s) {
  return atom(Cmp::Ge, var_term(v), constant(s));
}

/// Embeds a (flattened) multiplex formula into the assertion language.
inline AssertionPtr from_mux_formula(const MuxFormula& f) {
  switch (f.kind) {
    case MuxFormula::Kind::VarAtom: return threshold_atom(f.index, f.threshold);
    case MuxFormula::Kind::MuxAtom:
      throw Error(ErrorCode::UnknownSymbol, "multiplex atom in an unflattened formula");
    case MuxFormula::Kind::Not: return negate(from_mux_formula(*f.lhs));
    case MuxFormula::Kind::And: return conj({from_mux_formula(*f.lhs), from_mux_formula(*f.rhs)});
    case MuxFormula::Kind::Or: return disj({from_mux_formula(*f.lhs), from_mux_formula(*f.rhs)});
  }
  return truth(false);
}

// ---------------------------------------------------------------------------
// Evaluation over Z

inline std::int64_t eval_term(const Term& t, const State& s, const Valuation& k) {
  switch (t.kind) {
    case Term::Kind::Const: return t.value;
    case Term::Kind::Var:
      if (t.index < 0 || static_cast<std::size_t>(t.index) >= s.size()) {
        throw Error(ErrorCode::UnknownSymbol, "variable symbol out of range");
      }
      return s[t.index];
    case Term::Kind::Param:
      if (t.index < 0 || static_cast<std::size_t>(t.index) >= k.size()) {
        throw Error(ErrorCode::UnknownSymbol, "parameter symbol out of range");
      }
      return k[t.index];
    case Term::Kind::Plus: return eval_term(*t.lhs, s, k) + eval_term(*t.rhs, s, k);
    case Term::Kind::Minus: return eval_term(*t.lhs, s, k) - eval_term(*t.rhs, s, k);
  }
  return 0;
}

inline bool compare(Cmp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case Cmp::Eq: return a == b;
    case Cmp::Lt: return a < b;
    case Cmp::Gt: return a > b;
    case Cmp::Le: return a <= b;
    case Cmp::Ge: return a >= b;
  }
  return false;
}

inline bool eval_assertion(const Assertion& a, const State& s, const Valuation& k) {
  switch (a.kind) {
    case Assertion::Kind::True: return true;
    case Assertion::Kind::False: return false;
    case Assertion::Kind::Atom: return compare(a.op, eval_term(*a.lhs, s, k), eval_term(*a.rhs, s, k));
    case Assertion::Kind::Not: return !eval_assertion(*a.args[0], s, k);
    case Assertion::Kind::And:
      for (const auto& x : a.args) {
        if (!eval_assertion(*x, s, k)) return false;
      }
      return true;
    case Assertion::Kind::Or:
      for (const auto& x : a.args) {
        if (eval_assertion(*x, s, k)) return true;
      }
      return false;
    case Assertion::Kind::Implies:
      return !eval_assertion(*a.args[0], s, k) || eval_assertion(*a.args[1], s, k);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Substitution Q[v <- t]. No binders, so this is plain replacement; shared
// subtrees stay shared.

class Substituter {
 public:
  Substituter(int variable, TermPtr replacement)
      : variable_(variable), replacement_(std::move(replacement)) {}

  TermPtr operator()(const TermPtr& t) {
    if (auto it = terms_.find(t.get()); it != terms_.end()) return it->second;
    TermPtr out = t;
    switch (t->kind) {
      case Term::Kind::Var:
        if (t->index == variable_) out = replacement_;
        break;
      case Term::Kind::Plus:
      case Term::Kind::Minus: {
        TermPtr l = (*this)(t->lhs), r = (*this)(t->rhs);
        if (l != t->lhs || r != t->rhs) {
          out = t->kind == Term::Kind::Plus ? plus(l, r) : minus(l, r);
        }
        break;
      }
      default: break;
    }
    terms_.emplace(t.get(), out);
    return out;
  }

  AssertionPtr operator()(const AssertionPtr& a) {
    if (auto it = assertions_.find(a.get()); it != assertions_.end()) return it->second;
    AssertionPtr out = a;
    if (a->kind == Assertion::Kind::Atom) {
      TermPtr l = (*this)(a->lhs), r = (*this)(a->rhs);
      if (l != a->lhs || r != a->rhs) out = atom(a->op, l, r);
    } else if (!a->args.empty()) {
      std::vector<AssertionPtr> args;
      args.reserve(a->args.size());
      bool changed = false;
      for (const auto& x : a->args) {
        args.push_back((*this)(x));
        changed |= args.back() != x;
      }
      if (changed) {
        out = std::make_shared<const Assertion>(
            Assertion{a->kind, a->op, nullptr, nullptr, std::move(args)});
      }
    }
    assertions_.emplace(a.get(), out);
    return out;
  }

 private:
  int variable_;
  TermPtr replacement_;
  std::unordered_map<const Term*, TermPtr> terms_;
  std::unordered_map<const Assertion*, AssertionPtr> assertions_;
};

inline AssertionPtr substitute(const AssertionPtr& q, int variable, const TermPtr& replacement) {
  Substituter sub(variable, replacement);
  return sub(q);
}

// ---------------------------------------------------------------------------
// Structural equality and symbol collection

inline bool structurally_equal(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Const: return a.value == b.value;
    case Term::Kind::Var:
    case Term::Kind::Param: return a.index == b.index;
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

inline bool structurally_equal(const Assertion& a, const Assertion& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == Assertion::Kind::Atom) {
    return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

struct SymbolSet {
  std::set<int> variables;
  std::set<int> params;
};

inline void collect_symbols(const Term& t, SymbolSet& out) {
  switch (t.kind) {
    case Term::Kind::Var: out.variables.insert(t.index); break;
    case Term::Kind::Param: out.params.insert(t.index); break;
    case Term::Kind::Plus:
    case Term::Kind::Minus:
      collect_symbols(*t.lhs, out);
      collect_symbols(*t.rhs, out);
      break;
    default: break;
  }
}

inline void collect_symbols(const Assertion& a, SymbolSet& out) {
  if (a.kind == Assertion::Kind::Atom) {
    collect_symbols(*a.lhs, out);
    collect_symbols(*a.rhs, out);
  }
  for (const auto& x : a.args) collect_symbols(*x, out);
}

inline std::size_t node_count(const Assertion& a) {
  std::size_t n = 1;
  for (const auto& x : a.args) n += node_count(*x);
  return n;
}

// ---------------------------------------------------------------------------
// Printing: `v>=1`, `!`, `&`, `|`, `=>`, `K[v,{m1,m2}]`.

inline std::string to_string(const Network& net, const Term& t) {
  switch (t.kind) {
    case Term::Kind::Const: return std::to_string(t.value);
    case Term::Kind::Var: return net.variable(t.index).name;
    case Term::Kind::Param: return net.param_name(t.index);
    case Term::Kind::Plus:
    case Term::Kind::Minus: {
      std::string rhs = to_string(net, *t.rhs);
      if (t.rhs->kind == Term::Kind::Plus || t.rhs->kind == Term::Kind::Minus) rhs = "(" + rhs + ")";
      return to_string(net, *t.lhs) + (t.kind == Term::Kind::Plus ? "+" : "-") + rhs;
    }
  }
  return "?";
}

namespace detail {

inline int precedence(const Assertion& a) {
  switch (a.kind) {
    case Assertion::Kind::Implies: return 1;
    case Assertion::Kind::Or: return 2;
    case Assertion::Kind::And: return 3;
    default: return 4;
  }
}

}  // namespace detail

inline std::string to_string(const Network& net, const Assertion& a) {
  auto wrap = [&](const Assertion& child, bool parens) {
    std::string s = to_string(net, child);
    return parens ? "(" + s + ")" : s;
  };
  switch (a.kind) {
    case Assertion::Kind::True: return "true";
    case Assertion::Kind::False: return "false";
    case Assertion::Kind::Atom:
      return to_string(net, *a.lhs) + cmp_text(a.op) + to_string(net, *a.rhs);
    case Assertion::Kind::Not: {
      const Assertion& x = *a.args[0];
      const bool bare = x.kind == Assertion::Kind::Not || x.kind == Assertion::Kind::True ||
                        x.kind == Assertion::Kind::False;
      return "!" + wrap(x, !bare);
    }
    case Assertion::Kind::And:
    case Assertion::Kind::Or: {
      const int prec = detail::precedence(a);
      std::string out;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += a.kind == Assertion::Kind::And ? " & " : " | ";
        out += wrap(*a.args[i], detail::precedence(*a.args[i]) <= prec);
      }
      return out;
    }
    case Assertion::Kind::Implies:
      return wrap(*a.args[0], detail::precedence(*a.args[0]) <= 1) + " => " +
             wrap(*a.args[1], detail::precedence(*a.args[1]) < 1);
  }
  return "?";
}

inline std::string to_string(const Network& net, const AssertionPtr& a) { return to_string(net, *a); }

}  // namespace grnhoare
