#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "grnhoare/assertion.hpp"
#include "grnhoare/network.hpp"

namespace grnhoare {

struct SourceLoc {
  int line = 0;
  int column = 0;

  std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

/// Path program AST.
///  - Seq holds >= 2 members, Forall/Exists hold >= 2 branches.
///  - If uses `cond`, body[0] (then) and body[1] (else).
///  - While uses `cond`, `invariant` and body[0].
struct Program {
  enum class Kind { Inc, Dec, Assign, Assert, Seq, If, While, Forall, Exists, Epsilon };

  Kind kind;
  int variable = -1;
  int value = 0;
  AssertionPtr cond;
  AssertionPtr invariant;
  std::vector<ProgramPtr> body;
  SourceLoc loc;
};

inline ProgramPtr make_program(Program p) { return std::make_shared<const Program>(std::move(p)); }

inline ProgramPtr inc(int v) { return make_program({Program::Kind::Inc, v, 0, nullptr, nullptr, {}, {}}); }
inline ProgramPtr dec(int v) { return make_program({Program::Kind::Dec, v, 0, nullptr, nullptr, {}, {}}); }
inline ProgramPtr assign(int v, int k) {
  return make_program({Program::Kind::Assign, v, k, nullptr, nullptr, {}, {}});
}
inline ProgramPtr assert_program(AssertionPtr e) {
  return make_program({Program::Kind::Assert, -1, 0, std::move(e), nullptr, {}, {}});
}
inline ProgramPtr epsilon() {
  return make_program({Program::Kind::Epsilon, -1, 0, nullptr, nullptr, {}, {}});
}
/// Sequential composition; nested sequences are flattened (associativity).
inline ProgramPtr sequence(const std::vector<ProgramPtr>& parts) {
  std::vector<ProgramPtr> flat;
  for (const auto& p : parts) {
    if (p->kind == Program::Kind::Seq) flat.insert(flat.end(), p->body.begin(), p->body.end());
    else flat.push_back(p);
  }
  if (flat.size() == 1) return flat.front();
  return make_program({Program::Kind::Seq, -1, 0, nullptr, nullptr, std::move(flat), {}});
}
namespace detail {
// Nested quantifiers of the same kind are merged; both choices are associative.
inline ProgramPtr quantifier(Program::Kind kind, const std::vector<ProgramPtr>& branches) {
  std::vector<ProgramPtr> flat;
  for (const auto& b : branches) {
    if (b->kind == kind) flat.insert(flat.end(), b->body.begin(), b->body.end());
    else flat.push_back(b);
  }
  return make_program({kind, -1, 0, nullptr, nullptr, std::move(flat), {}});
}
}  // namespace detail
inline ProgramPtr forall(const std::vector<ProgramPtr>& branches) {
  return detail::quantifier(Program::Kind::Forall, branches);
}
inline ProgramPtr exists(const std::vector<ProgramPtr>& branches) {
  return detail::quantifier(Program::Kind::Exists, branches);
}
inline ProgramPtr if_then_else(AssertionPtr e, ProgramPtr then_p, ProgramPtr else_p) {
  return make_program({Program::Kind::If, -1, 0, std::move(e), nullptr,
                       {std::move(then_p), std::move(else_p)}, {}});
}
inline ProgramPtr while_loop(AssertionPtr e, AssertionPtr invariant, ProgramPtr body,
                             SourceLoc loc = {}) {
  return make_program({Program::Kind::While, -1, 0, std::move(e), std::move(invariant),
                       {std::move(body)}, loc});
}

struct HoareTriple {
  AssertionPtr pre;
  ProgramPtr program;
  AssertionPtr post;
};

/// Structural equality; source locations are ignored.
inline bool structurally_equal(const Program& a, const Program& b) {
  if (a.kind != b.kind || a.variable != b.variable || a.value != b.value) return false;
  if ((a.cond == nullptr) != (b.cond == nullptr)) return false;
  if (a.cond && !structurally_equal(*a.cond, *b.cond)) return false;
  if ((a.invariant == nullptr) != (b.invariant == nullptr)) return false;
  if (a.invariant && !structurally_equal(*a.invariant, *b.invariant)) return false;
  if (a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (!structurally_equal(*a.body[i], *b.body[i])) return false;
  }
  return true;
}

inline bool contains_while(const Program& p) {
  if (p.kind == Program::Kind::While) return true;
  for (const auto& b : p.body) {
    if (contains_while(*b)) return true;
  }
  return false;
}

inline std::string to_string(const Network& net, const Program& p) {
  auto join = [&](const std::vector<ProgramPtr>& xs, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += sep;
      out += to_string(net, *xs[i]);
    }
    return out;
  };
  switch (p.kind) {
    case Program::Kind::Inc: return net.variable(p.variable).name + "+";
    case Program::Kind::Dec: return net.variable(p.variable).name + "-";
    case Program::Kind::Assign: return net.variable(p.variable).name + ":=" + std::to_string(p.value);
    case Program::Kind::Assert: return "assert(" + to_string(net, *p.cond) + ")";
    case Program::Kind::Seq: return join(p.body, "; ");
    case Program::Kind::If:
      return "if " + to_string(net, *p.cond) + " then " + to_string(net, *p.body[0]) + " else " +
             to_string(net, *p.body[1]) + " end";
    case Program::Kind::While:
      return "while " + to_string(net, *p.cond) + " with " + to_string(net, *p.invariant) + " do " +
             to_string(net, *p.body[0]) + " end";
    case Program::Kind::Forall: return "forall(" + join(p.body, ", ") + ")";
    case Program::Kind::Exists: return "exists(" + join(p.body, ", ") + ")";
    case Program::Kind::Epsilon: return "eps";
  }
  return "?";
}

inline std::string to_string(const Network& net, const ProgramPtr& p) { return to_string(net, *p); }

}  // namespace grnhoare
