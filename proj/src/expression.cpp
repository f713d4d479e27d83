#include "rugged/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "rugged/errors.hpp"

namespace rugged {

class ExpressionParser {
 public:
  using Op = Expression::Op;

  explicit ExpressionParser(std::string_view text) : s_(text) {}

  std::vector<Expression::Instr> parse() {
    expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + std::string(s_) + "': " + what + " at position " +
                      std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void expr() {
    term();
    while (accept('+')) {
      term();
      out_.push_back({Op::Add});
    }
  }

  void term() {
    factor();
    while (accept('*')) {
      factor();
      out_.push_back({Op::Mul});
    }
  }

  void factor() {
    primary();
    if (accept('^')) {
      factor();
      out_.push_back({Op::Pow});
    }
  }

  void primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto* first = s_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - first);
      out_.push_back({Op::Number, v});
      return;
    }
    if (accept('(')) {
      expr();
      expect(')');
      return;
    }
    std::size_t end = pos_;
    while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
    const std::string_view word = s_.substr(pos_, end - pos_);
    if (word == "n") {
      pos_ = end;
      out_.push_back({Op::Var});
      return;
    }
    if (word == "sqrt" || word == "ln") {
      pos_ = end;
      expect('(');
      expr();
      expect(')');
      out_.push_back({word == "sqrt" ? Op::Sqrt : Op::Ln});
      return;
    }
    fail("unknown token '" + std::string(word.empty() ? s_.substr(pos_, 1) : word) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<Expression::Instr> out_;
};

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.program_ = ExpressionParser(text).parse();
  return e;
}

double Expression::operator()(double n) const {
  std::vector<double> stack;
  stack.reserve(program_.size());
  auto pop = [&stack] {
    const double v = stack.back();
    stack.pop_back();
    return v;
  };
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::Number:
        stack.push_back(ins.value);
        break;
      case Op::Var:
        stack.push_back(n);
        break;
      case Op::Sqrt:
        stack.back() = std::sqrt(stack.back());
        break;
      case Op::Ln:
        stack.back() = std::log(stack.back());
        break;
      case Op::Add: {
        const double rhs = pop();
        stack.back() += rhs;
        break;
      }
      case Op::Mul: {
        const double rhs = pop();
        stack.back() *= rhs;
        break;
      }
      case Op::Pow: {
        const double rhs = pop();
        stack.back() = std::pow(stack.back(), rhs);
        break;
      }
    }
  }
  return stack.back();
}

}  // namespace rugged
