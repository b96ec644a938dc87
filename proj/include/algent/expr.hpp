#ifndef ALGENT_EXPR_HPP
#define ALGENT_EXPR_HPP

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algent/rational.hpp"

namespace algent {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression tree for the mapping DSL. Pow carries either a literal integer
// exponent or the name of a quantified exponent variable (exclude clauses).
struct Expr {
  enum class Kind { Number, Param, SeqRef, Var, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind = Kind::Number;
  Rat number;
  std::string name;  // Param, SeqRef, Var ("x" or "y")
  long offset = 0;   // SeqRef, Var: index relative to n
  ExprPtr lhs, rhs;  // binary children; Neg and Pow use lhs only
  long pow_value = 0;
  std::string pow_ident;
};

inline ExprPtr make_number(Rat v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = std::move(v);
  return e;
}

inline ExprPtr make_name(Expr::Kind kind, std::string name, long offset = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->name = std::move(name);
  e->offset = offset;
  return e;
}

inline ExprPtr make_binary(Expr::Kind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

inline ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Neg;
  e->lhs = std::move(a);
  return e;
}

inline ExprPtr make_pow(ExprPtr base, long value, std::string ident = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->lhs = std::move(base);
  e->pow_value = value;
  e->pow_ident = std::move(ident);
  return e;
}

struct ParamDecl {
  std::string name;
  std::optional<Rat> value;  // absent: sampled generically per seed
};

struct ExcludeDecl {
  ExprPtr lhs, rhs;                     // requirement lhs != rhs
  std::vector<std::string> quantifiers; // exponent variables, range 1..bound
  long bound = 0;
};

struct EquationDecl {
  ExprPtr lhs, rhs;
};

struct MappingSource {
  std::string name;
  std::vector<ParamDecl> params;
  std::vector<std::string> seqs;
  std::vector<ExcludeDecl> excludes;
  std::vector<EquationDecl> equations;  // one (scalar) or two (system)

  bool is_system() const { return equations.size() == 2; }
  bool has_param(const std::string& n) const {
    for (const auto& p : params)
      if (p.name == n) return true;
    return false;
  }
  bool has_seq(const std::string& n) const {
    for (const auto& s : seqs)
      if (s == n) return true;
    return false;
  }
};

namespace detail {

struct Token {
  enum class Type { Ident, Integer, Symbol, End };
  Type type = Type::End;
  std::string text;
  Int value;  // Integer
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + msg);
  }

  int get() {
    if (pos_ >= s_.size()) return -1;
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return static_cast<unsigned char>(c);
  }

  int look() const { return pos_ < s_.size() ? static_cast<unsigned char>(s_[pos_]) : -1; }

  void advance() {
    for (;;) {
      while (look() == ' ' || look() == '\t' || look() == '\r' || look() == '\n') get();
      if (look() == '#') {
        while (look() != -1 && look() != '\n') get();
        continue;
      }
      break;
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    int c = look();
    if (c == -1) {
      tok_.type = Token::Type::End;
      return;
    }
    if (std::isalpha(c) || c == '_') {
      std::string id;
      while (std::isalnum(look()) || look() == '_') id += static_cast<char>(get());
      tok_.type = Token::Type::Ident;
      tok_.text = std::move(id);
      return;
    }
    if (std::isdigit(c)) {
      std::string num;
      while (std::isdigit(look())) num += static_cast<char>(get());
      tok_.type = Token::Type::Integer;
      tok_.text = num;
      tok_.value = Int(num);
      return;
    }
    static const std::string singles = "{}[]()+-*/^=,;<";
    if (c == '!') {
      get();
      if (look() != '=') fail("expected '=' after '!'");
      get();
      tok_.type = Token::Type::Symbol;
      tok_.text = "!=";
      return;
    }
    if (singles.find(static_cast<char>(c)) != std::string::npos) {
      get();
      std::string sym(1, static_cast<char>(c));
      if (c == '<' && look() == '=') {
        get();
        sym = "<=";
      }
      tok_.type = Token::Type::Symbol;
      tok_.text = sym;
      return;
    }
    fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  MappingSource parse() {
    expect_ident("map");
    src_.name = parse_map_name();
    expect_symbol("{");
    while (!at_symbol("}")) parse_statement();
    expect_symbol("}");
    if (lex_.peek().type != Token::Type::End) fail(lex_.peek(), "trailing input after '}'");
    validate();
    return std::move(src_);
  }

 private:
  Lexer lex_;
  MappingSource src_;
  bool in_exclude_ = false;

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError("line " + std::to_string(t.line) + ", col " + std::to_string(t.col) + ": " + msg);
  }

  bool at_symbol(const std::string& s) const {
    return lex_.peek().type == Token::Type::Symbol && lex_.peek().text == s;
  }
  bool at_ident(const std::string& s) const {
    return lex_.peek().type == Token::Type::Ident && lex_.peek().text == s;
  }
  void expect_symbol(const std::string& s) {
    if (!at_symbol(s)) fail(lex_.peek(), "expected '" + s + "'");
    lex_.next();
  }
  void expect_ident(const std::string& s) {
    if (!at_ident(s)) fail(lex_.peek(), "expected '" + s + "'");
    lex_.next();
  }
  std::string expect_any_ident() {
    if (lex_.peek().type != Token::Type::Ident) fail(lex_.peek(), "expected identifier");
    return lex_.next().text;
  }

  // Map names may contain hyphens (ttri-q2); pieced together from tokens.
  std::string parse_map_name() {
    std::string name = expect_any_ident();
    while (at_symbol("-")) {
      lex_.next();
      const Token& t = lex_.peek();
      if (t.type != Token::Type::Ident && t.type != Token::Type::Integer)
        fail(t, "expected name fragment after '-'");
      name += "-" + lex_.next().text;
    }
    return name;
  }

  void parse_statement() {
    if (at_ident("param")) {
      lex_.next();
      for (;;) {
        ParamDecl d;
        d.name = expect_any_ident();
        if (at_symbol("=")) {
          lex_.next();
          d.value = parse_rational_literal();
        }
        src_.params.push_back(std::move(d));
        if (at_symbol(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect_symbol(";");
      return;
    }
    if (at_ident("seq")) {
      lex_.next();
      for (;;) {
        src_.seqs.push_back(expect_any_ident());
        if (at_symbol(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect_symbol(";");
      return;
    }
    if (at_ident("exclude")) {
      lex_.next();
      in_exclude_ = true;
      ExcludeDecl d;
      d.lhs = parse_expr();
      expect_symbol("!=");
      d.rhs = parse_expr();
      if (at_ident("for")) {
        lex_.next();
        for (;;) {
          d.quantifiers.push_back(expect_any_ident());
          if (at_symbol(",")) {
            lex_.next();
            continue;
          }
          break;
        }
        expect_symbol("<=");
        if (lex_.peek().type != Token::Type::Integer) fail(lex_.peek(), "expected integer bound");
        d.bound = static_cast<long>(lex_.next().value.get_si());
      }
      in_exclude_ = false;
      src_.excludes.push_back(std::move(d));
      expect_symbol(";");
      return;
    }
    // Otherwise a component equation.
    EquationDecl eq;
    eq.lhs = parse_expr();
    expect_symbol("=");
    eq.rhs = parse_expr();
    expect_symbol(";");
    src_.equations.push_back(std::move(eq));
  }

  Rat parse_rational_literal() {
    bool neg = false;
    if (at_symbol("-")) {
      lex_.next();
      neg = true;
    }
    if (lex_.peek().type != Token::Type::Integer) fail(lex_.peek(), "expected number");
    Int num = lex_.next().value;
    Int den = 1;
    if (at_symbol("/")) {
      lex_.next();
      if (lex_.peek().type != Token::Type::Integer) fail(lex_.peek(), "expected denominator");
      den = lex_.next().value;
    }
    Rat r = make_rat(num, den);
    return neg ? Rat(-r) : r;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (at_symbol("+") || at_symbol("-")) {
      bool add = lex_.next().text == "+";
      ExprPtr r = parse_term();
      e = make_binary(add ? Expr::Kind::Add : Expr::Kind::Sub, std::move(e), std::move(r));
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (at_symbol("*") || at_symbol("/")) {
      bool mul = lex_.next().text == "*";
      ExprPtr r = parse_factor();
      e = make_binary(mul ? Expr::Kind::Mul : Expr::Kind::Div, std::move(e), std::move(r));
    }
    return e;
  }

  ExprPtr parse_factor() {
    if (at_symbol("-")) {
      lex_.next();
      return make_neg(parse_factor());
    }
    ExprPtr base = parse_atom();
    if (at_symbol("^")) {
      lex_.next();
      bool neg = false;
      if (at_symbol("-")) {
        lex_.next();
        neg = true;
      }
      if (lex_.peek().type == Token::Type::Integer) {
        long v = static_cast<long>(lex_.next().value.get_si());
        return make_pow(std::move(base), neg ? -v : v);
      }
      if (lex_.peek().type == Token::Type::Ident && in_exclude_ && !neg)
        return make_pow(std::move(base), 0, lex_.next().text);
      fail(lex_.peek(), "expected integer exponent");
    }
    return base;
  }

  ExprPtr parse_atom() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Integer) {
      return make_number(Rat(lex_.next().value));
    }
    if (at_symbol("(")) {
      lex_.next();
      ExprPtr e = parse_expr();
      expect_symbol(")");
      return e;
    }
    if (t.type == Token::Type::Ident) {
      std::string name = lex_.next().text;
      if (at_symbol("[")) {
        lex_.next();
        expect_ident("n");
        long off = 0;
        if (at_symbol("+") || at_symbol("-")) {
          bool plus = lex_.next().text == "+";
          if (lex_.peek().type != Token::Type::Integer) fail(lex_.peek(), "expected integer offset");
          off = static_cast<long>(lex_.next().value.get_si());
          if (!plus) off = -off;
        }
        expect_symbol("]");
        bool is_var = (name == "x" || name == "y");
        return make_name(is_var ? Expr::Kind::Var : Expr::Kind::SeqRef, std::move(name), off);
      }
      if (name == "x" || name == "y") fail(t, "variable '" + name + "' needs an index like x[n]");
      return make_name(Expr::Kind::Param, std::move(name));
    }
    fail(t, "expected expression");
  }

  void check_expr(const ExprPtr& e, bool allow_vars, const std::set<std::string>& quants) {
    switch (e->kind) {
      case Expr::Kind::Number:
        return;
      case Expr::Kind::Param:
        if (!src_.has_param(e->name)) {
          if (src_.has_seq(e->name))
            throw ParseError("sequence '" + e->name + "' needs an index like " + e->name + "[n]");
          throw ParseError("undeclared parameter '" + e->name + "'");
        }
        return;
      case Expr::Kind::SeqRef:
        if (!src_.has_seq(e->name)) throw ParseError("undeclared sequence '" + e->name + "'");
        if (!allow_vars) throw ParseError("sequences cannot appear in exclusions");
        return;
      case Expr::Kind::Var:
        if (!allow_vars) throw ParseError("variables cannot appear in exclusions");
        if (e->name == "x" && (e->offset < -1 || e->offset > 1))
          throw ParseError("x index offset must be one of n-1, n, n+1");
        if (e->name == "y" && (e->offset < 0 || e->offset > 1))
          throw ParseError("y index offset must be n or n+1");
        return;
      case Expr::Kind::Neg:
        check_expr(e->lhs, allow_vars, quants);
        return;
      case Expr::Kind::Pow:
        check_expr(e->lhs, allow_vars, quants);
        if (!e->pow_ident.empty() && quants.find(e->pow_ident) == quants.end())
          throw ParseError("unquantified exponent '" + e->pow_ident + "'");
        return;
      default:
        check_expr(e->lhs, allow_vars, quants);
        check_expr(e->rhs, allow_vars, quants);
        return;
    }
  }

  void validate() {
    std::set<std::string> names;
    for (const auto& p : src_.params) {
      if (p.name == "x" || p.name == "y" || p.name == "n")
        throw ParseError("reserved name '" + p.name + "' cannot be a parameter");
      if (!names.insert(p.name).second) throw ParseError("duplicate declaration of '" + p.name + "'");
    }
    for (const auto& s : src_.seqs) {
      if (s == "x" || s == "y" || s == "n")
        throw ParseError("reserved name '" + s + "' cannot be a sequence");
      if (!names.insert(s).second) throw ParseError("duplicate declaration of '" + s + "'");
    }
    if (src_.equations.empty()) throw ParseError("mapping has no equation");
    if (src_.equations.size() > 2) throw ParseError("at most two component equations are allowed");
    for (const auto& eq : src_.equations) {
      check_expr(eq.lhs, true, {});
      check_expr(eq.rhs, true, {});
    }
    for (const auto& ex : src_.excludes) {
      std::set<std::string> quants(ex.quantifiers.begin(), ex.quantifiers.end());
      if (quants.size() != ex.quantifiers.size()) throw ParseError("duplicate quantifier");
      if (!ex.quantifiers.empty() && ex.bound < 1) throw ParseError("quantifier bound must be >= 1");
      check_expr(ex.lhs, false, quants);
      check_expr(ex.rhs, false, quants);
    }
  }
};

inline int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

inline void print_expr(const Expr& e, int parent_prec, std::string& out) {
  int prec = precedence(e.kind);
  bool parens = prec < parent_prec;
  if (parens) out += "(";
  switch (e.kind) {
    case Expr::Kind::Number:
      if (e.number < 0) {
        out += "(" + to_string(e.number) + ")";
      } else {
        out += to_string(e.number);
      }
      break;
    case Expr::Kind::Param:
      out += e.name;
      break;
    case Expr::Kind::SeqRef:
    case Expr::Kind::Var:
      out += e.name + "[n";
      if (e.offset > 0) out += "+" + std::to_string(e.offset);
      if (e.offset < 0) out += std::to_string(e.offset);
      out += "]";
      break;
    case Expr::Kind::Add:
      print_expr(*e.lhs, prec, out);
      out += " + ";
      print_expr(*e.rhs, prec + 1, out);
      break;
    case Expr::Kind::Sub:
      print_expr(*e.lhs, prec, out);
      out += " - ";
      print_expr(*e.rhs, prec + 1, out);
      break;
    case Expr::Kind::Mul:
      print_expr(*e.lhs, prec, out);
      out += "*";
      print_expr(*e.rhs, prec + 1, out);
      break;
    case Expr::Kind::Div:
      print_expr(*e.lhs, prec, out);
      out += "/";
      print_expr(*e.rhs, prec + 1, out);
      break;
    case Expr::Kind::Neg:
      out += "-";
      print_expr(*e.lhs, prec, out);
      break;
    case Expr::Kind::Pow:
      print_expr(*e.lhs, prec + 1, out);
      out += "^";
      if (!e.pow_ident.empty()) {
        out += e.pow_ident;
      } else if (e.pow_value < 0) {
        out += "-" + std::to_string(-e.pow_value);
      } else {
        out += std::to_string(e.pow_value);
      }
      break;
  }
  if (parens) out += ")";
}

}  // namespace detail

inline MappingSource parse_mapping_source(const std::string& text) {
  return detail::Parser(text).parse();
}

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_expr(e, 0, out);
  return out;
}

inline std::string to_source(const MappingSource& src) {
  std::string out = "map " + src.name + " {\n";
  for (const auto& p : src.params) {
    out += "  param " + p.name;
    if (p.value) out += " = " + to_string(*p.value);
    out += ";\n";
  }
  for (const auto& s : src.seqs) out += "  seq " + s + ";\n";
  for (const auto& ex : src.excludes) {
    out += "  exclude " + to_string(*ex.lhs) + " != " + to_string(*ex.rhs);
    if (!ex.quantifiers.empty()) {
      out += " for ";
      for (std::size_t i = 0; i < ex.quantifiers.size(); ++i) {
        if (i) out += ", ";
        out += ex.quantifiers[i];
      }
      out += " <= " + std::to_string(ex.bound);
    }
    out += ";\n";
  }
  for (const auto& eq : src.equations)
    out += "  " + to_string(*eq.lhs) + " = " + to_string(*eq.rhs) + ";\n";
  out += "}\n";
  return out;
}

// Exact evaluation of a variable-free expression. Parameter and sequence
// values come from the callbacks; quantified exponents from `quant`.
inline Rat eval_rat(const Expr& e, const std::function<Rat(const std::string&)>& param,
                    const std::function<Rat(const std::string&, long)>& seq, long n,
                    const std::map<std::string, long>* quant = nullptr) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Param:
      return param(e.name);
    case Expr::Kind::SeqRef:
      return seq(e.name, n + e.offset);
    case Expr::Kind::Var:
      throw std::domain_error("eval_rat: expression contains a variable");
    case Expr::Kind::Add:
      return eval_rat(*e.lhs, param, seq, n, quant) + eval_rat(*e.rhs, param, seq, n, quant);
    case Expr::Kind::Sub:
      return eval_rat(*e.lhs, param, seq, n, quant) - eval_rat(*e.rhs, param, seq, n, quant);
    case Expr::Kind::Mul:
      return eval_rat(*e.lhs, param, seq, n, quant) * eval_rat(*e.rhs, param, seq, n, quant);
    case Expr::Kind::Div: {
      Rat d = eval_rat(*e.rhs, param, seq, n, quant);
      if (d == 0) throw std::domain_error("eval_rat: division by zero");
      return eval_rat(*e.lhs, param, seq, n, quant) / d;
    }
    case Expr::Kind::Neg:
      return -eval_rat(*e.lhs, param, seq, n, quant);
    case Expr::Kind::Pow: {
      long ex = e.pow_value;
      if (!e.pow_ident.empty()) {
        if (!quant || quant->find(e.pow_ident) == quant->end())
          throw std::domain_error("eval_rat: unbound exponent " + e.pow_ident);
        ex = quant->at(e.pow_ident);
      }
      return rat_pow(eval_rat(*e.lhs, param, seq, n, quant), ex);
    }
  }
  throw std::logic_error("eval_rat: unreachable");
}

}  // namespace algent

#endif  // ALGENT_EXPR_HPP
