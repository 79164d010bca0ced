#include "specrange/coeffs.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace specrange {

struct CoeffExpr::Node {
  Kind kind;
  Complex value{0.0, 0.0};  // Constant
  int exponent = 0;         // Pow
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const CoeffExpr::Node>;

bool finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

Complex int_pow(Complex base, int k) {
  if (k < 0) {
    if (base == Complex(0.0, 0.0)) throw DomainError("zero raised to a negative power");
    return Complex(1.0, 0.0) / int_pow(base, -k);
  }
  Complex acc(1.0, 0.0);
  Complex b = base;
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      offset_(offset) {}

CoeffExpr CoeffExpr::constant(Complex value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Constant;
  node->value = value;
  return CoeffExpr(std::move(node));
}

CoeffExpr CoeffExpr::variable() {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Variable;
  return CoeffExpr(std::move(node));
}

#define SPECRANGE_DEFINE_BINARY(NAME, KIND)                      \
  CoeffExpr CoeffExpr::NAME(CoeffExpr lhs, CoeffExpr rhs) {      \
    auto node = std::make_shared<Node>();                        \
    node->kind = Kind::KIND;                                     \
    node->lhs = std::move(lhs.node_);                            \
    node->rhs = std::move(rhs.node_);                            \
    return CoeffExpr(std::move(node));                           \
  }

SPECRANGE_DEFINE_BINARY(add, Add)
SPECRANGE_DEFINE_BINARY(sub, Sub)
SPECRANGE_DEFINE_BINARY(mul, Mul)
SPECRANGE_DEFINE_BINARY(div, Div)
#undef SPECRANGE_DEFINE_BINARY

CoeffExpr CoeffExpr::pow(CoeffExpr base, int exponent) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Pow;
  node->lhs = std::move(base.node_);
  node->exponent = exponent;
  return CoeffExpr(std::move(node));
}

#define SPECRANGE_DEFINE_UNARY(NAME, KIND)            \
  CoeffExpr CoeffExpr::NAME(CoeffExpr arg) {          \
    auto node = std::make_shared<Node>();             \
    node->kind = Kind::KIND;                          \
    node->lhs = std::move(arg.node_);                 \
    return CoeffExpr(std::move(node));                \
  }

SPECRANGE_DEFINE_UNARY(sin, Sin)
SPECRANGE_DEFINE_UNARY(cos, Cos)
SPECRANGE_DEFINE_UNARY(exp, Exp)
#undef SPECRANGE_DEFINE_UNARY

CoeffExpr::Kind CoeffExpr::kind() const { return node_->kind; }

namespace {

Complex eval_node(const CoeffExpr::Node& node, Complex w) {
  using Kind = CoeffExpr::Kind;
  switch (node.kind) {
    case Kind::Constant:
      return node.value;
    case Kind::Variable:
      return w;
    case Kind::Add:
      return eval_node(*node.lhs, w) + eval_node(*node.rhs, w);
    case Kind::Sub:
      return eval_node(*node.lhs, w) - eval_node(*node.rhs, w);
    case Kind::Mul:
      return eval_node(*node.lhs, w) * eval_node(*node.rhs, w);
    case Kind::Div: {
      const Complex den = eval_node(*node.rhs, w);
      if (den == Complex(0.0, 0.0)) throw DomainError("division by zero");
      return eval_node(*node.lhs, w) / den;
    }
    case Kind::Pow:
      return int_pow(eval_node(*node.lhs, w), node.exponent);
    case Kind::Sin:
      return std::sin(eval_node(*node.lhs, w));
    case Kind::Cos:
      return std::cos(eval_node(*node.lhs, w));
    case Kind::Exp:
      return std::exp(eval_node(*node.lhs, w));
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace

Complex CoeffExpr::eval(Complex w) const {
  const Complex value = eval_node(*node_, w);
  if (!finite(value)) throw DomainError("expression value is not finite");
  return value;
}

bool CoeffExpr::holomorphic_at(Complex w) const {
  try {
    (void)eval(w);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Canonical printing. The grammar has no unary minus, so negative real parts
// are printed as (0-x); the output always reparses to the same tree.

namespace {

std::string print_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string print_complex(Complex z) {
  const double re = z.real();
  const double im = z.imag();
  if (im == 0.0) {
    if (re >= 0.0) return print_real(re);
    return "(0-" + print_real(-re) + ")";
  }
  std::string re_part = re >= 0.0 ? print_real(re) : "0-" + print_real(-re);
  std::string im_mag = print_real(std::abs(im)) + "*i";
  if (re == 0.0 && im > 0.0) return "(" + im_mag + ")";
  return "(" + re_part + (im >= 0.0 ? "+" : "-") + im_mag + ")";
}

int precedence(CoeffExpr::Kind kind) {
  using Kind = CoeffExpr::Kind;
  switch (kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

std::string print_node(const CoeffExpr::Node& node) {
  using Kind = CoeffExpr::Kind;
  const int prec = precedence(node.kind);
  auto wrap = [&](const CoeffExpr::Node& child, bool right_side) {
    std::string text = print_node(child);
    const int child_prec = precedence(child.kind);
    bool need = child_prec < prec;
    // subtraction and division are left-associative
    if (!need && right_side && child_prec == prec &&
        (node.kind == Kind::Sub || node.kind == Kind::Div)) {
      need = true;
    }
    return need ? "(" + text + ")" : text;
  };
  switch (node.kind) {
    case Kind::Constant:
      return print_complex(node.value);
    case Kind::Variable:
      return "w";
    case Kind::Add:
      return wrap(*node.lhs, false) + "+" + wrap(*node.rhs, true);
    case Kind::Sub:
      return wrap(*node.lhs, false) + "-" + wrap(*node.rhs, true);
    case Kind::Mul:
      return wrap(*node.lhs, false) + "*" + wrap(*node.rhs, true);
    case Kind::Div:
      return wrap(*node.lhs, false) + "/" + wrap(*node.rhs, true);
    case Kind::Pow: {
      std::string base = print_node(*node.lhs);
      if (precedence(node.lhs->kind) < 4) base = "(" + base + ")";
      return base + "^" + std::to_string(node.exponent);
    }
    case Kind::Sin:
      return "sin(" + print_node(*node.lhs) + ")";
    case Kind::Cos:
      return "cos(" + print_node(*node.lhs) + ")";
    case Kind::Exp:
      return "exp(" + print_node(*node.lhs) + ")";
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace

std::string CoeffExpr::print() const { return print_node(*node_); }

// ---------------------------------------------------------------------------
// Polynomial extraction.

namespace {

constexpr int kMaxPolyDegree = 64;

using Poly = std::vector<Complex>;

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == Complex(0.0, 0.0)) p.pop_back();
}

std::optional<Poly> poly_node(const CoeffExpr::Node& node) {
  using Kind = CoeffExpr::Kind;
  switch (node.kind) {
    case Kind::Constant:
      return Poly{node.value};
    case Kind::Variable:
      return Poly{Complex(0.0, 0.0), Complex(1.0, 0.0)};
    case Kind::Add:
    case Kind::Sub: {
      auto a = poly_node(*node.lhs);
      auto b = poly_node(*node.rhs);
      if (!a || !b) return std::nullopt;
      const double sign = node.kind == Kind::Add ? 1.0 : -1.0;
      if (b->size() > a->size()) a->resize(b->size(), Complex(0.0, 0.0));
      for (std::size_t i = 0; i < b->size(); ++i) (*a)[i] += sign * (*b)[i];
      trim(*a);
      return a;
    }
    case Kind::Mul: {
      auto a = poly_node(*node.lhs);
      auto b = poly_node(*node.rhs);
      if (!a || !b) return std::nullopt;
      if (a->size() + b->size() > kMaxPolyDegree + 2) return std::nullopt;
      Poly out(a->size() + b->size() - 1, Complex(0.0, 0.0));
      for (std::size_t i = 0; i < a->size(); ++i)
        for (std::size_t j = 0; j < b->size(); ++j) out[i + j] += (*a)[i] * (*b)[j];
      trim(out);
      return out;
    }
    case Kind::Div: {
      auto a = poly_node(*node.lhs);
      auto b = poly_node(*node.rhs);
      if (!a || !b) return std::nullopt;
      trim(*b);
      if (b->size() != 1 || (*b)[0] == Complex(0.0, 0.0)) return std::nullopt;
      for (auto& c : *a) c /= (*b)[0];
      return a;
    }
    case Kind::Pow: {
      auto base = poly_node(*node.lhs);
      if (!base) return std::nullopt;
      trim(*base);
      if (node.exponent < 0) {
        if (base->size() != 1 || (*base)[0] == Complex(0.0, 0.0)) return std::nullopt;
        return Poly{int_pow((*base)[0], node.exponent)};
      }
      if ((base->size() - 1) * node.exponent > kMaxPolyDegree) return std::nullopt;
      Poly acc{Complex(1.0, 0.0)};
      for (int k = 0; k < node.exponent; ++k) {
        Poly out(acc.size() + base->size() - 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < acc.size(); ++i)
          for (std::size_t j = 0; j < base->size(); ++j) out[i + j] += acc[i] * (*base)[j];
        acc = std::move(out);
      }
      trim(acc);
      return acc;
    }
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp: {
      auto arg = poly_node(*node.lhs);
      if (!arg) return std::nullopt;
      trim(*arg);
      if (arg->size() != 1) return std::nullopt;
      const Complex v = (*arg)[0];
      switch (node.kind) {
        case Kind::Sin:
          return Poly{std::sin(v)};
        case Kind::Cos:
          return Poly{std::cos(v)};
        default:
          return Poly{std::exp(v)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Complex>> CoeffExpr::polynomial() const {
  return poly_node(*node_);
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  CoeffExpr parse() {
    CoeffExpr result = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  // Nodes over constant operands are folded so that printed complex
  // constants reparse to a single constant node. Folds that would raise a
  // domain error are kept symbolic.
  static CoeffExpr fold(CoeffExpr expr) {
    if (expr.kind() == CoeffExpr::Kind::Constant) return expr;
    try {
      return CoeffExpr::constant(expr.eval(Complex(0.0, 0.0)));
    } catch (const DomainError&) {
      return expr;
    }
  }

  template <typename Op>
  static CoeffExpr combine(Op&& op, CoeffExpr lhs, CoeffExpr rhs) {
    const bool both_const = lhs.kind() == CoeffExpr::Kind::Constant &&
                            rhs.kind() == CoeffExpr::Kind::Constant;
    CoeffExpr node = op(std::move(lhs), std::move(rhs));
    return both_const ? fold(std::move(node)) : node;
  }

  CoeffExpr expr() {
    CoeffExpr lhs = term();
    for (;;) {
      if (consume('+')) {
        lhs = combine(CoeffExpr::add, std::move(lhs), term());
      } else if (consume('-')) {
        lhs = combine(CoeffExpr::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  CoeffExpr term() {
    CoeffExpr lhs = factor();
    for (;;) {
      if (consume('*')) {
        lhs = combine(CoeffExpr::mul, std::move(lhs), factor());
      } else if (consume('/')) {
        lhs = combine(CoeffExpr::div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  CoeffExpr factor() {
    CoeffExpr base_expr = base();
    if (consume('^')) {
      const bool was_const = base_expr.kind() == CoeffExpr::Kind::Constant;
      CoeffExpr node = CoeffExpr::pow(std::move(base_expr), integer());
      return was_const ? fold(std::move(node)) : node;
    }
    return base_expr;
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer exponent");
    long value = 0;
    const bool negative = text_[start] == '-';
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000000) fail("exponent too large");
      ++pos_;
    }
    return static_cast<int>(negative ? -value : value);
  }

  CoeffExpr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      CoeffExpr inner = expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("expected number, 'w', 'i', '(' or function");
  }

  CoeffExpr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    // optional exponent part so canonically printed constants round-trip
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
      if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        pos_ = probe;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double value = std::strtod(literal.c_str(), &end);
    if (end != literal.c_str() + literal.size()) {
      pos_ = start;
      fail("malformed number");
    }
    return CoeffExpr::constant(value);
  }

  CoeffExpr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "w") return CoeffExpr::variable();
    if (name == "i") return CoeffExpr::constant(Complex(0.0, 1.0));
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!consume('(')) fail("expected '(' after function name");
      CoeffExpr arg = expr();
      if (!consume(')')) fail("expected ')'");
      if (name == "sin") return CoeffExpr::sin(std::move(arg));
      if (name == "cos") return CoeffExpr::cos(std::move(arg));
      return CoeffExpr::exp(std::move(arg));
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CoeffExpr parse_coeff(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Scalar reduction and its linearization.

Complex eval_t(const ProblemSpec& spec, std::span<const double> alpha, Complex w) {
  if (alpha.size() != static_cast<std::size_t>(spec.n()))
    throw std::invalid_argument("alpha dimension mismatch");
  Complex value = spec.g.eval(w);
  for (std::size_t j = 0; j < alpha.size(); ++j) value += alpha[j] * spec.f[j].eval(w);
  return value;
}

LinearSystem linearize(const ProblemSpec& spec, Complex w) {
  LinearSystem sys;
  sys.n = spec.n();
  sys.F.resize(2 * static_cast<std::size_t>(sys.n));
  for (int j = 0; j < sys.n; ++j) {
    const Complex fj = spec.f[j].eval(w);
    sys.F[j] = fj.real();
    sys.F[sys.n + j] = fj.imag();
  }
  const Complex g = spec.g.eval(w);
  sys.G = {-g.real(), -g.imag()};
  return sys;
}

Complex LinearSystem::residual(std::span<const double> alpha) const {
  double re = -G[0];
  double im = -G[1];
  for (int j = 0; j < n; ++j) {
    re += at(0, j) * alpha[j];
    im += at(1, j) * alpha[j];
  }
  return {re, im};
}

std::array<double, 2> LinearSystem::singular_values() const {
  // Eigenvalues of the 2x2 Gram matrix F F^T.
  double a = 0.0, b = 0.0, c = 0.0;
  for (int j = 0; j < n; ++j) {
    a += at(0, j) * at(0, j);
    b += at(0, j) * at(1, j);
    c += at(1, j) * at(1, j);
  }
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(std::max(0.25 * (a - c) * (a - c) + b * b, 0.0));
  const double hi = std::max(mean + disc, 0.0);
  const double lo = std::max(mean - disc, 0.0);
  return {std::sqrt(hi), std::sqrt(lo)};
}

DegeneracyClass classify_degeneracy(const LinearSystem& sys, double tau) {
  if (tau < 0.0) throw std::invalid_argument("negative degeneracy tolerance");
  const auto [smax, smin] = sys.singular_values();
  return smin > tau * (smax + 1.0) ? DegeneracyClass::Cr : DegeneracyClass::Ci;
}

DegeneracyClass classify_degeneracy(const ProblemSpec& spec, Complex w, double tau) {
  return classify_degeneracy(linearize(spec, w), tau);
}

}  // namespace specrange
