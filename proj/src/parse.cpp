#include "mae/parse.hpp"

#include <cctype>

namespace mae {

namespace {

struct Parser {
  const std::string& s;
  ContextPtr ctx;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, i); }

  // expr := term (('+'|'-') term)*
  Expr expr() {
    Expr r = term();
    for (;;) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }
  // term := unary (('*'|'/') unary)*
  Expr term() {
    Expr r = unary();
    for (;;) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        size_t at = i;
        Expr d = unary();
        if (d.zero()) throw ParseError("division by zero", at);
        r /= d;
      } else {
        return r;
      }
    }
  }
  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  // power := primary ('^' ['-'] integer)?   (right operand is an integer literal or parenthesized one)
  Expr power() {
    Expr b = primary();
    if (!eat('^')) return b;
    ws();
    bool paren = eat('(');
    bool neg = eat('-');
    ws();
    size_t st = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (st == i) fail("integer exponent expected");
    long k = std::stol(s.substr(st, i - st));
    if (paren && !eat(')')) fail("')' expected");
    if (neg && b.zero()) fail("zero to a negative power");
    return b.pow(int(neg ? -k : k));
  }
  Expr primary() {
    ws();
    if (i >= s.size()) fail("unexpected end of input");
    char c = s[i];
    if (c == '(') {
      ++i;
      Expr e = expr();
      if (!eat(')')) fail("')' expected");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      return Expr(mpq_class(mpz_class(s.substr(st, i - st))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t st = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
      std::string name = s.substr(st, i - st);
      ws();
      if (i < s.size() && s[i] == '(') {
        ++i;
        size_t at = i;
        Expr arg = expr();
        if (!eat(')')) fail("')' expected");
        return apply(name, arg, st, at);
      }
      auto a = ctx->find(name);
      if (!a) throw ParseError("unknown identifier '" + name + "'", st);
      return Expr::atom(ctx, *a);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  Expr apply(const std::string& f, const Expr& arg, size_t st, size_t at) {
    if (auto a = ctx->find(f + "(" + arg.str() + ")")) return Expr::atom(ctx, *a);
    int atom = single_atom(arg);
    if (atom < 0) throw ParseError("function argument must be a single symbol", at);
    if (f == "sin") return Expr::atom(ctx, ctx->sin_atom(atom));
    if (f == "cos") return Expr::atom(ctx, ctx->cos_atom(atom));
    if (auto a = ctx->find_function(f, atom)) return Expr::atom(ctx, *a);
    throw ParseError("undeclared function '" + f + "'", st);
  }
  static int single_atom(const Expr& e) {
    if (!e.den().is_one() || e.num().size() != 1) return -1;
    uint64_t m = e.num().var_mask();
    if (__builtin_popcountll(m) != 1) return -1;
    int v = __builtin_ctzll(m);
    return e.num() == Poly::var(v) ? v : -1;
  }
};

}  // namespace

Expr parse_expr(const std::string& s, const ContextPtr& ctx) {
  Parser p{s, ctx};
  Expr e = p.expr();
  p.ws();
  if (p.i != s.size()) p.fail(std::string("unexpected '") + s[p.i] + "'");
  return e;
}

}  // namespace mae
