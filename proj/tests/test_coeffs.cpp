#include "doctest.h"

#include "specrange/coeffs.hpp"
#include "test_support.hpp"

using namespace specrange;
using testsupport::TestRng;

TEST_CASE("parse: polynomial and function trees") {
  const CoeffExpr poly = parse_coeff("w^2 - 1");
  CHECK(poly.eval(Complex(2.0, 0.0)) == Complex(3.0, 0.0));
  CHECK(poly.eval(Complex(0.0, 1.0)) == Complex(-2.0, 0.0));

  const CoeffExpr nested = parse_coeff("sin(1/w)");
  CHECK(nested.eval(Complex(2.0 / M_PI, 0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(nested.eval(Complex(0.0, 0.0)), DomainError);
  CHECK(!nested.holomorphic_at(Complex(0.0, 0.0)));
  CHECK(nested.holomorphic_at(Complex(0.5, 0.5)));
}

TEST_CASE("parse: syntax errors carry offsets") {
  CHECK_THROWS_AS(parse_coeff("w^"), ParseError);
  try {
    parse_coeff("w^");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse_coeff("2*q"), ParseError);
  CHECK_THROWS_AS(parse_coeff("(1+2"), ParseError);
  CHECK_THROWS_AS(parse_coeff(""), ParseError);
}

TEST_CASE("parse: canonical print round-trips") {
  TestRng rng(41);
  const char* inputs[] = {
      "w^2 - 1",  "sin(1/w)",         "2*w/(1+w^2)", "exp(w)*cos(w)-3",
      "w^-2 + i", "(1+2*w)^3/(4-w)",  "0-3-4*i",     "1.5e-3*w",
  };
  for (const char* text : inputs) {
    const CoeffExpr parsed = parse_coeff(text);
    const std::string printed = parsed.print();
    const CoeffExpr reparsed = parse_coeff(printed);
    CHECK(reparsed.print() == printed);
    for (int k = 0; k < 16; ++k) {
      const Complex w = rng.complex_in(2.0);
      if (!parsed.holomorphic_at(w)) continue;
      CHECK(std::abs(parsed.eval(w) - reparsed.eval(w)) <= 1e-14 * (1.0 + std::abs(parsed.eval(w))));
    }
  }
  // programmatic negative constants print to parseable text
  const CoeffExpr negative = CoeffExpr::constant(Complex(-3.0, -4.0));
  CHECK(parse_coeff(negative.print()).eval(Complex(0.0)) == Complex(-3.0, -4.0));
}

TEST_CASE("eval_t: spec examples") {
  // w^2 - 1 - 2 w a1 + 2 a2
  ProblemSpec sadex;
  sadex.g = parse_coeff("w^2-1");
  sadex.f = {parse_coeff("0-2*w"), parse_coeff("2")};
  const double a_ones[2] = {1.0, 1.0};
  CHECK(std::abs(eval_t(sadex, std::span<const double>(a_ones, 2), Complex(1.0, 0.0))) ==
        0.0);

  // w^3 + w^2 a1 + w a2 + a3 at (0, 1/4, 0), w = i/2
  ProblemSpec cube;
  cube.g = parse_coeff("w^3");
  cube.f = {parse_coeff("w^2"), parse_coeff("w"), parse_coeff("1")};
  const double a_cube[3] = {0.0, 0.25, 0.0};
  CHECK(std::abs(eval_t(cube, std::span<const double>(a_cube, 3), Complex(0.0, 0.5))) <=
        1e-16);

  ProblemSpec zero;
  zero.g = CoeffExpr::constant(0.0);
  zero.f = {CoeffExpr::constant(0.0)};
  const double a_any[1] = {123.0};
  CHECK(eval_t(zero, std::span<const double>(a_any, 1), Complex(3.0, -2.0)) ==
        Complex(0.0, 0.0));
}

TEST_CASE("linearize: spec examples") {
  ProblemSpec ident;
  ident.g = parse_coeff("0-3-4*i");
  ident.f = {parse_coeff("1"), parse_coeff("i")};
  const LinearSystem s1 = linearize(ident, Complex(0.7, -0.3));
  CHECK(s1.at(0, 0) == 1.0);
  CHECK(s1.at(0, 1) == 0.0);
  CHECK(s1.at(1, 0) == 0.0);
  CHECK(s1.at(1, 1) == 1.0);
  CHECK(s1.G[0] == 3.0);
  CHECK(s1.G[1] == 4.0);

  ProblemSpec sadex;
  sadex.g = parse_coeff("w^2-1");
  sadex.f = {parse_coeff("0-2*w"), parse_coeff("2")};
  const LinearSystem s2 = linearize(sadex, Complex(0.0, 1.0));
  CHECK(s2.at(0, 0) == doctest::Approx(0.0));
  CHECK(s2.at(0, 1) == doctest::Approx(2.0));
  CHECK(s2.at(1, 0) == doctest::Approx(-2.0));
  CHECK(s2.at(1, 1) == doctest::Approx(0.0));
  CHECK(s2.G[0] == doctest::Approx(2.0));
  CHECK(s2.G[1] == doctest::Approx(0.0));

  ProblemSpec cube;
  cube.g = parse_coeff("w^3");
  cube.f = {parse_coeff("w^2"), parse_coeff("w"), parse_coeff("1")};
  const LinearSystem s3 = linearize(cube, Complex(0.0, 0.5));
  CHECK(s3.at(0, 0) == doctest::Approx(-0.25));
  CHECK(s3.at(0, 1) == doctest::Approx(0.0));
  CHECK(s3.at(0, 2) == doctest::Approx(1.0));
  CHECK(s3.at(1, 0) == doctest::Approx(0.0));
  CHECK(s3.at(1, 1) == doctest::Approx(0.5));
  CHECK(s3.at(1, 2) == doctest::Approx(0.0));
  CHECK(s3.G[0] == doctest::Approx(0.0));
  CHECK(s3.G[1] == doctest::Approx(0.125));
}

TEST_CASE("classify_degeneracy: spec examples") {
  ProblemSpec sadex;
  sadex.g = parse_coeff("w^2-1");
  sadex.f = {parse_coeff("0-2*w"), parse_coeff("2")};
  CHECK(classify_degeneracy(sadex, Complex(1.0, 1.0)) == DegeneracyClass::Cr);
  CHECK(classify_degeneracy(sadex, Complex(-0.5, 0.0)) == DegeneracyClass::Ci);

  ProblemSpec ident;
  ident.g = parse_coeff("0-3-4*i");
  ident.f = {parse_coeff("1"), parse_coeff("i")};
  CHECK(classify_degeneracy(ident, Complex(5.0, -2.0)) == DegeneracyClass::Cr);
}

TEST_CASE("property: linearization consistency on random specs") {
  TestRng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.pick(4);
    const ProblemSpec spec = testsupport::random_poly_spec(rng, n);
    std::vector<double> alpha(n);
    for (double& a : alpha) a = rng.uniform(-3.0, 3.0);
    const Complex w = rng.complex_in(2.0);
    const Complex direct = eval_t(spec, alpha, w);
    const Complex via_system = linearize(spec, w).residual(alpha);
    CHECK(std::abs(direct - via_system) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("property: scaling every coefficient scales eval_t") {
  TestRng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.pick(3);
    const ProblemSpec spec = testsupport::random_poly_spec(rng, n);
    const Complex c = rng.complex_in(2.0) + Complex(0.3, 0.0);
    ProblemSpec scaled;
    scaled.g = CoeffExpr::mul(CoeffExpr::constant(c), spec.g);
    for (const CoeffExpr& f : spec.f)
      scaled.f.push_back(CoeffExpr::mul(CoeffExpr::constant(c), f));
    std::vector<double> alpha(n);
    for (double& a : alpha) a = rng.uniform(-2.0, 2.0);
    const Complex w = rng.complex_in(2.0);
    const Complex lhs = eval_t(scaled, alpha, w);
    const Complex rhs = c * eval_t(spec, alpha, w);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("property: zero-tolerance classification matches the n=2 sign test") {
  TestRng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    // rational points with exactly representable arithmetic
    const double re = rng.pick(9) - 4.0;
    const double im = rng.pick(9) - 4.0;
    const Complex w(re / 4.0, im / 4.0);
    ProblemSpec spec;
    spec.g = parse_coeff("w^3-1");
    spec.f = {parse_coeff("w"), parse_coeff("w^2")};
    const Complex f1 = spec.f[0].eval(w);
    const Complex f2 = spec.f[1].eval(w);
    const bool sign_test_degenerate = std::imag(f1 * std::conj(f2)) == 0.0;
    const bool classified_degenerate =
        classify_degeneracy(spec, w, 0.0) == DegeneracyClass::Ci;
    CHECK(classified_degenerate == sign_test_degenerate);
  }
}

TEST_CASE("polynomial extraction") {
  CHECK(*parse_coeff("w^2-1").polynomial() ==
        std::vector<Complex>{Complex(-1.0), Complex(0.0), Complex(1.0)});
  CHECK(!parse_coeff("sin(w)").polynomial());
  CHECK(!parse_coeff("1/w").polynomial());
  CHECK(*parse_coeff("(1+w)*(1-w)").polynomial() ==
        std::vector<Complex>{Complex(1.0), Complex(0.0), Complex(-1.0)});
  CHECK(*parse_coeff("sin(2)*w").polynomial() ==
        std::vector<Complex>{Complex(0.0), Complex(std::sin(2.0))});
}
