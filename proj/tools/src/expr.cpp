#include "jdl_cli/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace jdl::cli {

namespace {

// A parsed value; constant subexpressions are folded.
struct Value {
  Field f;
  std::optional<double> c;

  Field field() const { return c ? constant(*c) : f; }
};

Value num(double v) { return {{}, v}; }

enum class Tok { Num, Ident, Op, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // normalized operator or identifier
  double value = 0;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance(1);
    Token t;
    t.column = column_;
    if (pos_ >= s_.size()) return t;
    const char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && pos_ + 1 < s_.size() &&
                                                         std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))))
      return number(t);
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
      t.kind = Tok::Ident;
      t.text = std::string(s_.substr(pos_, end - pos_));
      advance(end - pos_);
      return t;
    }
    // UTF-8 minus, times and division signs.
    for (auto [utf8, ascii] : {std::pair{"−", "-"}, std::pair{"×", "*"}, std::pair{"÷", "/"}}) {
      const std::string_view u(utf8);
      if (s_.substr(pos_, u.size()) == u) {
        t.kind = Tok::Op;
        t.text = ascii;
        pos_ += u.size();
        ++column_;
        return t;
      }
    }
    advance(1);
    switch (ch) {
      case '+': case '-': case '*': case '/': case '^':
        t.kind = Tok::Op;
        t.text = std::string(1, ch);
        return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ',': t.kind = Tok::Comma; return t;
      default: break;
    }
    throw ExpressionError(t.column, std::string("unexpected character '") + ch + "'");
  }

 private:
  Token number(Token t) {
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
    };
    digits();
    if (end < s_.size() && s_[end] == '.') {
      ++end;
      digits();
    }
    if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
      std::size_t save = end++;
      if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
      if (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end])))
        digits();
      else
        end = save;  // "2e" followed by something else: let the parser complain
    }
    const auto text = s_.substr(pos_, end - pos_);
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw ExpressionError(t.column, "malformed number '" + std::string(text) + "'");
    t.kind = Tok::Num;
    t.value = v;
    advance(end - pos_);
    return t;
  }

  void advance(std::size_t n) {
    pos_ += n;
    column_ += static_cast<int>(n);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int column_ = 1;
};

class Parser {
 public:
  Parser(std::string_view s, const std::vector<std::string>& vars) : lex_(s), vars_(vars) { tok_ = lex_.next(); }

  Value parse() {
    if (tok_.kind == Tok::End) throw ExpressionError(tok_.column, "empty expression");
    Value v = expr();
    if (tok_.kind != Tok::End) throw ExpressionError(tok_.column, "unexpected " + describe(tok_));
    return v;
  }

 private:
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::Num: return "number";
      case Tok::Ident: return "'" + t.text + "'";
      case Tok::Op: return "'" + t.text + "'";
      case Tok::LParen: return "'('";
      case Tok::RParen: return "')'";
      case Tok::Comma: return "','";
      case Tok::End: return "end of expression";
    }
    return "token";
  }

  bool is_op(const char* op) const { return tok_.kind == Tok::Op && tok_.text == op; }
  void take() { tok_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) throw ExpressionError(tok_.column, std::string("expected ") + what + ", found " + describe(tok_));
    take();
  }

  Value expr() {
    Value v = term();
    while (is_op("+") || is_op("-")) {
      const bool plus = tok_.text == "+";
      take();
      const Value r = term();
      if (v.c && r.c)
        v = num(plus ? *v.c + *r.c : *v.c - *r.c);
      else
        v = {plus ? v.field() + r.field() : v.field() - r.field(), {}};
    }
    return v;
  }

  Value term() {
    Value v = unary();
    while (is_op("*") || is_op("/")) {
      const bool times = tok_.text == "*";
      const int col = tok_.column;
      take();
      const Value r = unary();
      if (!times && r.c && *r.c == 0.0) throw ExpressionError(col, "division by zero");
      if (v.c && r.c)
        v = num(times ? *v.c * *r.c : *v.c / *r.c);
      else
        v = {times ? v.field() * r.field() : v.field() / r.field(), {}};
    }
    return v;
  }

  Value unary() {
    if (is_op("-")) {
      take();
      const Value v = unary();
      return v.c ? num(-*v.c) : Value{-v.f, {}};
    }
    if (is_op("+")) {
      take();
      return unary();
    }
    return power();
  }

  Value power() {
    const Value base = primary();
    if (!is_op("^")) return base;
    const int col = tok_.column;
    take();
    return raise(base, unary(), col);
  }

  static Value raise(const Value& base, const Value& ex, int col) {
    if (base.c && ex.c) {
      const double r = std::pow(*base.c, *ex.c);
      if (!std::isfinite(r)) throw ExpressionError(col, "power of constants is not finite");
      return num(r);
    }
    if (ex.c) {
      const double n = *ex.c;
      // Small integer exponents by repeated products, so negative bases are fine.
      if (n == std::round(n) && std::abs(n) <= 16) {
        const int k = static_cast<int>(std::abs(n));
        if (k == 0) return num(1.0);
        Field acc = base.f;
        for (int i = 1; i < k; ++i) acc = acc * base.f;
        return {n < 0 ? 1.0 / acc : acc, {}};
      }
      return {pow(base.f, n), {}};
    }
    return {pow(base.field(), ex.f), {}};
  }

  std::vector<Value> arguments() {
    expect(Tok::LParen, "'('");
    std::vector<Value> args{expr()};
    while (tok_.kind == Tok::Comma) {
      take();
      args.push_back(expr());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Value call(const std::string& name, int col) {
    const std::vector<Value> a = arguments();
    auto arity = [&](std::size_t n) {
      if (a.size() != n)
        throw ExpressionError(col, name + " takes " + std::to_string(n) + " argument" + (n > 1 ? "s" : "") +
                                       ", got " + std::to_string(a.size()));
    };
    auto unary_fn = [&](double (*dfn)(double), Field (*ffn)(const Field&), bool positive, bool nonneg) -> Value {
      arity(1);
      if (a[0].c) {
        if (positive && *a[0].c <= 0) throw ExpressionError(col, name + " of a non-positive constant");
        if (nonneg && *a[0].c < 0) throw ExpressionError(col, name + " of a negative constant");
        return num(dfn(*a[0].c));
      }
      return {ffn(a[0].f), {}};
    };
    if (name == "exp") return unary_fn(static_cast<double (*)(double)>(std::exp), static_cast<Field (*)(const Field&)>(exp), false, false);
    if (name == "log") return unary_fn(static_cast<double (*)(double)>(std::log), static_cast<Field (*)(const Field&)>(log), true, false);
    if (name == "sin") return unary_fn(static_cast<double (*)(double)>(std::sin), static_cast<Field (*)(const Field&)>(sin), false, false);
    if (name == "cos") return unary_fn(static_cast<double (*)(double)>(std::cos), static_cast<Field (*)(const Field&)>(cos), false, false);
    if (name == "sqrt") return unary_fn(static_cast<double (*)(double)>(std::sqrt), static_cast<Field (*)(const Field&)>(sqrt), false, true);
    if (name == "atan2") {
      arity(2);
      if (a[0].c && a[1].c) return num(std::atan2(*a[0].c, *a[1].c));
      return {atan2(a[0].field(), a[1].field()), {}};
    }
    if (name == "pow") {
      arity(2);
      return raise(a[0], a[1], col);
    }
    throw ExpressionError(col, "unknown function '" + name + "'");
  }

  Value primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Num:
        take();
        return num(t.value);
      case Tok::LParen: {
        take();
        Value v = expr();
        expect(Tok::RParen, "')'");
        return v;
      }
      case Tok::Ident: {
        take();
        if (tok_.kind == Tok::LParen) return call(t.text, t.column);
        for (std::size_t i = 0; i < vars_.size(); ++i)
          if (vars_[i] == t.text) return {coord(static_cast<int>(i)), {}};
        if (t.text == "pi") return num(std::numbers::pi);
        if (t.text == "e") return num(std::numbers::e);
        throw ExpressionError(t.column, "unknown variable '" + t.text + "'");
      }
      default:
        throw ExpressionError(t.column, "expected a value, found " + describe(t));
    }
  }

  Lexer lex_;
  const std::vector<std::string>& vars_;
  Token tok_;
};

}  // namespace

Field parse_expression(std::string_view text, const std::vector<std::string>& vars) {
  return Parser(text, vars).parse().field();
}

double parse_constant(std::string_view text) {
  const Value v = Parser(text, {}).parse();
  return *v.c;  // without variables every value folds
}

}  // namespace jdl::cli
