#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grnhoare/assertion.hpp"
#include "grnhoare/error.hpp"
#include "grnhoare/network.hpp"
#include "grnhoare/program.hpp"

namespace grnhoare {

namespace detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };

  Kind kind;
  std::string text;
  SourceLoc loc;
};

inline std::vector<Token> tokenize(std::string_view src) {
  static constexpr std::string_view kTwoChar[] = {"..", "<-", ":=", "<=", ">=", "=>"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j - i > 9) throw Error(ErrorCode::SyntaxError, loc.str() + ": integer literal too large");
      out.push_back({Token::Kind::Int, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (auto two : kTwoChar) {
      if (src.substr(i, 2) == two) {
        out.push_back({Token::Kind::Punct, std::string(two), loc});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("{}()[],;:+-=<>!&|").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), loc});
      advance(1);
      continue;
    }
    throw Error(ErrorCode::SyntaxError, loc.str() + ": unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Token::Kind::End, "", {line, col}});
  return out;
}

inline bool is_keyword(const std::string& s) {
  static const char* const kKeywords[] = {
      "network", "var",  "multiplex", "target", "param", "true",   "false",  "assert", "if",
      "then",    "else", "end",       "while",  "with",  "do",     "forall", "exists", "eps",
      "pre",     "program", "post"};
  for (const char* k : kKeywords) {
    if (s == k) return true;
  }
  return false;
}

/// Recursive-descent parser over the token stream. Assertions and programs
/// need a network to resolve names; the network grammar does not.
class Parser {
 public:
  Parser(std::string_view src, const Network* net) : toks_(tokenize(src)), net_(net) {}

  // -- network ------------------------------------------------------------

  RawNetwork network() {
    RawNetwork raw;
    expect_word("network");
    expect("{");
    while (!at("}")) {
      const Token& t = peek();
      if (at_word("var")) {
        next();
        std::string name = ident("variable name");
        expect(":");
        if (integer() != 0) fail(t, "variable range must start at 0");
        expect("..");
        raw.variables.emplace_back(std::move(name), integer());
        expect(";");
      } else if (at_word("multiplex")) {
        next();
        std::string name = ident("multiplex name");
        expect(":");
        raw.multiplexes.emplace_back(std::move(name), mux_or());
        expect(";");
      } else if (at_word("target")) {
        next();
        std::string var = ident("variable name");
        expect("<-");
        std::vector<std::string> muxes{ident("multiplex name")};
        while (accept(",")) muxes.push_back(ident("multiplex name"));
        expect(";");
        raw.targets.emplace_back(std::move(var), std::move(muxes));
      } else if (at_word("param")) {
        next();
        raw.params.push_back(raw_param());
      } else {
        fail(t, "expected 'var', 'multiplex', 'target', 'param' or '}'");
      }
    }
    expect("}");
    expect_end();
    return raw;
  }

  /// Sequence of `param K[v,{...}] = n;` statements (valuation files).
  std::vector<RawParam> params() {
    std::vector<RawParam> out;
    while (peek().kind != Token::Kind::End) {
      expect_word("param");
      out.push_back(raw_param());
    }
    return out;
  }

  // -- assertions ---------------------------------------------------------

  AssertionPtr assertion() {
    AssertionPtr lhs = disjunction();
    if (accept("=>")) return implies(lhs, assertion());
    return lhs;
  }

  // -- programs -----------------------------------------------------------

  ProgramPtr program() {
    std::vector<ProgramPtr> parts{instruction()};
    std::vector<SourceLoc> locs{last_instruction_loc_};
    while (accept(";")) {
      parts.push_back(instruction());
      locs.push_back(last_instruction_loc_);
    }
    if (parts.size() > 1) {
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i]->kind == Program::Kind::Epsilon) {
          throw Error(ErrorCode::SyntaxError,
                      locs[i].str() + ": 'eps' cannot appear inside a sequence");
        }
      }
    }
    return sequence(parts);
  }

  HoareTriple triple() {
    HoareTriple t;
    expect_word("pre");
    expect("{");
    t.pre = assertion();
    expect("}");
    expect_word("program");
    expect("{");
    t.program = program();
    expect("}");
    expect_word("post");
    expect("{");
    t.post = assertion();
    expect("}");
    expect_end();
    return t;
  }

  void expect_end() {
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected trailing input");
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    const std::string near = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorCode::SyntaxError, t.loc.str() + ": " + msg + " (near " + near + ")");
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at(std::string_view punct, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == punct;
  }
  bool at_word(std::string_view word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == word;
  }
  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    next();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail(peek(), "expected '" + std::string(punct) + "'");
  }
  void expect_word(std::string_view word) {
    if (!at_word(word)) fail(peek(), "expected '" + std::string(word) + "'");
    next();
  }
  std::string ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || is_keyword(t.text)) fail(t, std::string("expected ") + what);
    next();
    return t.text;
  }
  long integer() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Int) fail(t, "expected integer");
    next();
    return std::stol(t.text);
  }

  const Network& net() const { return *net_; }

  int variable(const Token& t) const {
    if (auto v = net().find_variable(t.text)) return *v;
    throw Error(ErrorCode::UnknownVariable, t.loc.str() + ": unknown variable '" + t.text + "'");
  }

  /// K[v,{m1,...}] with the leading K already consumed.
  std::pair<std::string, std::vector<std::string>> param_ref() {
    expect("[");
    std::string var = ident("variable name");
    expect(",");
    expect("{");
    std::vector<std::string> res;
    if (!at("}")) {
      res.push_back(ident("multiplex name"));
      while (accept(",")) res.push_back(ident("multiplex name"));
    }
    expect("}");
    expect("]");
    return {std::move(var), std::move(res)};
  }

  RawParam raw_param() {
    const Token& k = peek();
    if (k.kind != Token::Kind::Ident || k.text != "K") fail(k, "expected 'K'");
    next();
    auto [var, res] = param_ref();
    expect("=");
    RawParam out{std::move(var), std::move(res), integer()};
    expect(";");
    return out;
  }

  // mformula: '|' < '&' < '!' / atom / parens
  RawMuxFormulaPtr mux_or() {
    RawMuxFormulaPtr lhs = mux_and();
    while (accept("|")) {
      lhs = std::make_shared<const RawMuxFormula>(
          RawMuxFormula{RawMuxFormula::Kind::Or, "", 0, lhs, mux_and()});
    }
    return lhs;
  }
  RawMuxFormulaPtr mux_and() {
    RawMuxFormulaPtr lhs = mux_unary();
    while (accept("&")) {
      lhs = std::make_shared<const RawMuxFormula>(
          RawMuxFormula{RawMuxFormula::Kind::And, "", 0, lhs, mux_unary()});
    }
    return lhs;
  }
  RawMuxFormulaPtr mux_unary() {
    if (accept("!")) {
      return std::make_shared<const RawMuxFormula>(
          RawMuxFormula{RawMuxFormula::Kind::Not, "", 0, mux_unary(), nullptr});
    }
    if (accept("(")) {
      RawMuxFormulaPtr inner = mux_or();
      expect(")");
      return inner;
    }
    std::string name = ident("variable or multiplex name");
    if (accept(">=")) {
      return std::make_shared<const RawMuxFormula>(
          RawMuxFormula{RawMuxFormula::Kind::Threshold, std::move(name), integer(), nullptr, nullptr});
    }
    return std::make_shared<const RawMuxFormula>(
        RawMuxFormula{RawMuxFormula::Kind::Reference, std::move(name), 0, nullptr, nullptr});
  }

  // assertion precedence: '=>' (right) < '|' < '&' < '!' / atom
  AssertionPtr disjunction() {
    std::vector<AssertionPtr> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return disj(std::move(parts));
  }
  AssertionPtr conjunction() {
    std::vector<AssertionPtr> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return conj(std::move(parts));
  }
  AssertionPtr unary() {
    if (accept("!")) return negate(unary());
    if (at_word("true")) {
      next();
      return truth(true);
    }
    if (at_word("false")) {
      next();
      return truth(false);
    }
    if (at("(")) {
      // Either a parenthesised assertion or a parenthesised term opening an atom.
      const std::size_t save = pos_;
      try {
        next();
        AssertionPtr inner = assertion();
        expect(")");
        if (!at_comparison() && !at("+") && !at("-")) return inner;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SyntaxError) throw;
      }
      pos_ = save;
    }
    return comparison();
  }

  bool at_comparison() const {
    return at("=") || at("<") || at(">") || at("<=") || at(">=");
  }

  AssertionPtr comparison() {
    TermPtr lhs = term();
    Cmp op;
    if (accept("=")) op = Cmp::Eq;
    else if (accept("<=")) op = Cmp::Le;
    else if (accept(">=")) op = Cmp::Ge;
    else if (accept("<")) op = Cmp::Lt;
    else if (accept(">")) op = Cmp::Gt;
    else fail(peek(), "expected comparison operator");
    return atom(op, std::move(lhs), term());
  }

  TermPtr term() {
    TermPtr lhs = term_primary();
    for (;;) {
      if (accept("+")) lhs = plus(lhs, term_primary());
      else if (accept("-")) lhs = minus(lhs, term_primary());
      else return lhs;
    }
  }

  TermPtr term_primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) return constant(integer());
    if (accept("(")) {
      TermPtr inner = term();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::Ident && t.text == "K" && at("[", 1)) {
      next();
      auto [var, res] = param_ref();
      const int v = net().variable_index(var);
      std::vector<int> muxes;
      for (const auto& name : res) {
        auto m = net().find_multiplex(name);
        if (!m) throw Error(ErrorCode::UnknownSymbol, t.loc.str() + ": unknown multiplex '" + name + "'");
        muxes.push_back(*m);
      }
      return param_term(static_cast<int>(net().param_index(v, net().resource_mask(v, muxes))));
    }
    if (t.kind == Token::Kind::Ident && !is_keyword(t.text)) {
      next();
      if (!net().find_variable(t.text)) {
        throw Error(ErrorCode::UnknownSymbol, t.loc.str() + ": unknown symbol '" + t.text + "'");
      }
      return var_term(variable(t));
    }
    fail(t, "expected term");
  }

  ProgramPtr instruction() {
    const Token& t = peek();
    last_instruction_loc_ = t.loc;
    if (t.kind != Token::Kind::Ident) fail(t, "expected instruction");
    if (t.text == "eps") {
      next();
      return epsilon();
    }
    if (t.text == "assert") {
      next();
      expect("(");
      AssertionPtr e = assertion();
      expect(")");
      return assert_program(std::move(e));
    }
    if (t.text == "if") {
      next();
      AssertionPtr e = assertion();
      expect_word("then");
      ProgramPtr then_p = program();
      expect_word("else");
      ProgramPtr else_p = program();
      expect_word("end");
      return if_then_else(std::move(e), std::move(then_p), std::move(else_p));
    }
    if (t.text == "while") {
      next();
      AssertionPtr e = assertion();
      expect_word("with");
      AssertionPtr inv = assertion();
      expect_word("do");
      ProgramPtr body = program();
      expect_word("end");
      return while_loop(std::move(e), std::move(inv), std::move(body), t.loc);
    }
    if (t.text == "forall" || t.text == "exists") {
      const bool universal = t.text == "forall";
      next();
      expect("(");
      std::vector<ProgramPtr> branches{program()};
      while (accept(",")) branches.push_back(program());
      expect(")");
      if (branches.size() < 2) fail(t, "quantifiers need at least two branches");
      return universal ? forall(branches) : exists(branches);
    }
    if (is_keyword(t.text)) fail(t, "unexpected keyword");
    next();
    const int v = variable(t);
    if (accept("+")) return inc(v);
    if (accept("-")) return dec(v);
    if (accept(":=")) {
      const Token& n = peek();
      const long k = integer();
      if (k < 0 || k > net().variable(v).bound) {
        throw Error(ErrorCode::AssignOutOfRange,
                    n.loc.str() + ": " + t.text + ":=" + std::to_string(k) + " is outside [0," +
                        std::to_string(net().variable(v).bound) + "]");
      }
      return assign(v, static_cast<int>(k));
    }
    fail(peek(), "expected '+', '-' or ':=' after variable");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Network* net_;
  SourceLoc last_instruction_loc_;
};

}  // namespace detail

inline Network parse_network(std::string_view text) {
  detail::Parser p(text, nullptr);
  return validate_network(p.network());
}

inline AssertionPtr parse_assertion(const Network& net, std::string_view text) {
  detail::Parser p(text, &net);
  AssertionPtr a = p.assertion();
  p.expect_end();
  return a;
}

inline ProgramPtr parse_program(const Network& net, std::string_view text) {
  detail::Parser p(text, &net);
  ProgramPtr prog = p.program();
  p.expect_end();
  return prog;
}

inline HoareTriple parse_triple(const Network& net, std::string_view text) {
  detail::Parser p(text, &net);
  return p.triple();
}

/// Reads `param K[...] = n;` statements and completes them with the network's
/// pinned parameters. Every parameter must end up with a value.
inline Valuation parse_valuation(const Network& net, std::string_view text) {
  detail::Parser p(text, &net);
  std::vector<std::optional<int>> values(net.param_count());
  for (std::size_t i = 0; i < net.param_count(); ++i) values[i] = net.fixed_param(i);
  for (const RawParam& raw : p.params()) {
    const int v = net.variable_index(raw.variable);
    std::vector<int> res;
    for (const auto& name : raw.resources) {
      auto m = net.find_multiplex(name);
      if (!m) throw Error(ErrorCode::UnknownName, "unknown multiplex '" + name + "'");
      res.push_back(*m);
    }
    const std::size_t idx = net.param_index(v, net.resource_mask(v, res));
    if (raw.value < 0 || raw.value > net.variable(v).bound) {
      throw Error(ErrorCode::ParamOutOfBounds,
                  net.param_name(idx) + " = " + std::to_string(raw.value) + " is outside [0," +
                      std::to_string(net.variable(v).bound) + "]");
    }
    if (values[idx] && *values[idx] != raw.value) {
      throw Error(ErrorCode::DuplicateName, "conflicting values for " + net.param_name(idx));
    }
    values[idx] = static_cast<int>(raw.value);
  }
  Valuation k;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) {
      throw Error(ErrorCode::IncompleteValuation, "no value given for " + net.param_name(i));
    }
    k.values.push_back(*values[i]);
  }
  return k;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace grnhoare
