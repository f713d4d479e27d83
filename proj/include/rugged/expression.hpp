#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rugged {

/// Arithmetic rule over the dimension n, e.g. "n^2" or "sqrt(n)*ln(n)".
///
/// Grammar:
///   expr    := term ('+' term)*
///   term    := factor ('*' factor)*
///   factor  := primary ('^' factor)?          right-associative
///   primary := number | 'n' | ('sqrt' | 'ln') '(' expr ')' | '(' expr ')'
class Expression {
 public:
  /// Throws ConfigError with the offending position on malformed input.
  static Expression parse(std::string_view text);

  double operator()(double n) const;
  const std::string& text() const noexcept { return text_; }

 private:
  enum class Op { Number, Var, Add, Mul, Pow, Sqrt, Ln };
  struct Instr {
    Op op;
    double value = 0.0;
  };
  friend class ExpressionParser;

  std::string text_;
  std::vector<Instr> program_;  // postfix
};

}  // namespace rugged
