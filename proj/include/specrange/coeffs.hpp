#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specrange {

using Complex = std::complex<double>;

/// Thrown when an expression is evaluated outside its domain
/// (division by zero, overflow to a non-finite value).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error from parse_coeff; carries the byte offset of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Immutable expression tree for one scalar coefficient function C -> C.
///
/// The node set is closed: constants, the variable w, +, -, *, /, integer
/// powers, sin, cos, exp. Copies share structure and are cheap.
class CoeffExpr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

  CoeffExpr() : CoeffExpr(constant(0.0)) {}

  static CoeffExpr constant(Complex value);
  static CoeffExpr variable();
  static CoeffExpr add(CoeffExpr lhs, CoeffExpr rhs);
  static CoeffExpr sub(CoeffExpr lhs, CoeffExpr rhs);
  static CoeffExpr mul(CoeffExpr lhs, CoeffExpr rhs);
  static CoeffExpr div(CoeffExpr num, CoeffExpr den);
  static CoeffExpr pow(CoeffExpr base, int exponent);
  static CoeffExpr sin(CoeffExpr arg);
  static CoeffExpr cos(CoeffExpr arg);
  static CoeffExpr exp(CoeffExpr arg);

  Kind kind() const;

  /// Evaluates at w. Throws DomainError on division by zero or when the
  /// result (or any intermediate) is not finite.
  Complex eval(Complex w) const;

  /// True when every quotient's denominator is nonzero at w, i.e. the
  /// expression is defined (and hence holomorphic) there.
  bool holomorphic_at(Complex w) const;

  /// Canonical printed form; parse_coeff(print()) reproduces the tree.
  std::string print() const;

  /// Dense coefficients (lowest order first) when the expression is a
  /// polynomial in w, nullopt otherwise. sin/cos/exp of constants and
  /// division by nonzero constants are folded.
  std::optional<std::vector<Complex>> polynomial() const;

  struct Node;

 private:
  explicit CoeffExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the expression grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | 'w' | 'i' | '(' expr ')' | ('sin'|'cos'|'exp') '(' expr ')'
/// Whitespace is insignificant.
CoeffExpr parse_coeff(std::string_view text);

/// Operator-function description g(w) + sum_j alpha_j f_j(w) at scalar level.
struct ProblemSpec {
  CoeffExpr g;
  std::vector<CoeffExpr> f;
  // User-supplied: the coefficient functions are holomorphic and linearly
  // independent on the window of interest. Not inferred.
  bool holomorphic_independent = true;

  int n() const { return static_cast<int>(f.size()); }
};

/// Real 2 x n linearization of t_alpha(w) = 0: rows are the real and
/// imaginary parts of f_j(w), and G = -(Re g, Im g), so that
/// t_alpha(w) = 0 iff F alpha = G.
struct LinearSystem {
  int n = 0;
  std::vector<double> F;  // row-major, 2 rows, n columns
  std::array<double, 2> G{0.0, 0.0};

  double at(int row, int col) const { return F[static_cast<std::size_t>(row) * n + col]; }

  /// Residual F alpha - G stacked as a complex number (Re, Im).
  Complex residual(std::span<const double> alpha) const;

  /// Singular values (larger, smaller) of the 2 x n matrix F.
  std::array<double, 2> singular_values() const;
};

enum class DegeneracyClass { Cr, Ci };

Complex eval_t(const ProblemSpec& spec, std::span<const double> alpha, Complex w);
LinearSystem linearize(const ProblemSpec& spec, Complex w);

inline constexpr double kDegeneracyTol = 1e-10;

/// Cr when F(w) has full rank 2 in the relative singular-value sense:
/// sigma_min > tau * (sigma_max + 1). Ci otherwise.
DegeneracyClass classify_degeneracy(const LinearSystem& sys, double tau = kDegeneracyTol);
DegeneracyClass classify_degeneracy(const ProblemSpec& spec, Complex w,
                                    double tau = kDegeneracyTol);

}  // namespace specrange
