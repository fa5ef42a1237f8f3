#include "invdyn/kernel/parser.hpp"

#include <cctype>

namespace invdyn {

namespace {

class Parser {
public:
  Parser(std::string_view text, const SymbolTable& table) : text_(text), table_(table) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size())
      fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      fail(pos_ < text_.size() ? std::string("expected '") + c + "', found '" + text_[pos_] + "'"
                               : std::string("expected '") + c + "' at end of input");
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(Expr::raw_product({Expr(-1), term()}));
      else
        break;
    }
    return terms.size() == 1 ? terms.front() : Expr::raw_sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*'))
        factors.push_back(unary());
      else if (accept('/'))
        factors.push_back(Expr::raw_power(unary(), Expr(-1)));
      else
        break;
    }
    return factors.size() == 1 ? factors.front() : Expr::raw_product(std::move(factors));
  }

  Expr unary() {
    if (accept('-'))
      return Expr::raw_product({Expr(-1), unary()});
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^'))
      return Expr::raw_power(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)))
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    std::string scale = "1";
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == frac)
        fail("digit expected after decimal point");
      digits += text_.substr(frac, pos_ - frac);
      scale += std::string(pos_ - frac, '0');
    }
    mpq_class q{mpz_class(digits, 10), mpz_class(scale, 10)};
    q.canonicalize();
    return Expr(q);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "ln" || name == "exp") {
      expect('(');
      Expr arg = expr();
      expect(')');
      return name == "ln" ? Expr::raw_log(arg) : Expr::raw_exp(arg);
    }
    auto s = table_.lookup(name);
    if (!s)
      throw UndeclaredSymbol("undeclared identifier '" + std::string(name) + "' at position " +
                             std::to_string(start));
    return Expr(*s);
  }

  std::string_view text_;
  const SymbolTable& table_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse(std::string_view text, const SymbolTable& table) { return Parser(text, table).run(); }

Expr parse_canonical(std::string_view text, const SymbolTable& table) { return parse(text, table).canonical(); }

} // namespace invdyn
