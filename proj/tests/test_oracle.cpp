#include <algorithm>
#include <cmath>
#include <cstdio>

#include "doctest.h"

#include "specrange/oracle.hpp"
#include "specrange/pseudo.hpp"
#include "test_support.hpp"

using namespace specrange;
using testsupport::TestRng;

TEST_CASE("sample_joint_range: example pair values") {
  const HermMatrix mats[2] = {testsupport::example_a1(), testsupport::example_a2()};
  const auto points = sample_joint_range(mats, 1, 5);
  // the first four samples are the canonical basis vectors
  CHECK(points[0][0] == doctest::Approx(1.0));
  CHECK(points[0][1] == doctest::Approx(0.0));
  CHECK(points.size() == 5);

  std::vector<Complex> u(4, Complex(0.0));
  u[0] = u[3] = 1.0 / std::sqrt(2.0);
  CHECK(mats[0].quadratic_form(u) == doctest::Approx(2.5));
  CHECK(mats[1].quadratic_form(u) == doctest::Approx(1.0));

  const double ones[1] = {1.0};
  const HermMatrix eye = HermMatrix::diagonal(std::span<const double>(ones, 1));
  const HermMatrix single[1] = {eye};
  for (const auto& point : sample_joint_range(single, 16, 3))
    CHECK(point[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polynomial_roots: frozen examples") {
  // w^3 + w/4: roots 0, +-i/2
  const Complex cube_poly[4] = {0.0, 0.25, 0.0, 1.0};
  auto roots = polynomial_roots(cube_poly);
  REQUIRE(roots.size() == 3);
  std::sort(roots.begin(), roots.end(),
            [](Complex a, Complex b) { return a.imag() < b.imag(); });
  CHECK(std::abs(roots[0] - Complex(0.0, -0.5)) <= 1e-10);
  CHECK(std::abs(roots[1]) <= 1e-10);
  CHECK(std::abs(roots[2] - Complex(0.0, 0.5)) <= 1e-10);

  // (w - 1)^2
  const Complex squared[3] = {1.0, -2.0, 1.0};
  roots = polynomial_roots(squared);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - Complex(1.0, 0.0)) <= 1e-6);
  CHECK(std::abs(roots[1] - Complex(1.0, 0.0)) <= 1e-6);

  CHECK(polynomial_roots(std::vector<Complex>{Complex(0.0)}).empty());
  CHECK(polynomial_roots(std::vector<Complex>{Complex(3.0)}).empty());
}

TEST_CASE("polynomial_roots: residual property on random polynomials") {
  TestRng rng(91);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + rng.pick(6);
    std::vector<Complex> coeffs;
    for (int k = 0; k <= deg; ++k) coeffs.push_back(rng.complex_in(2.0));
    coeffs.back() += Complex(0.5, 0.0);  // keep the degree honest
    double norm = 0.0;
    for (const Complex& c : coeffs) norm += std::abs(c);
    const auto roots = polynomial_roots(coeffs);
    CHECK(roots.size() == static_cast<std::size_t>(deg));
    for (Complex root : roots) {
      Complex value(0.0);
      for (std::size_t k = coeffs.size(); k-- > 0;) value = value * root + coeffs[k];
      CHECK(std::abs(value) <= 1e-10 * norm);
    }
  }
}

TEST_CASE("sample_wt: linear spec root shows up for basis vectors") {
  ProblemSpec linear;
  linear.g = parse_coeff("0-w");
  linear.f = {parse_coeff("1")};
  const double diag[2] = {1.0, 3.0};
  const HermMatrix mats[1] = {HermMatrix::diagonal(std::span<const double>(diag, 2))};
  const auto roots = sample_wt(mats, linear, 4, 17);
  bool found = false;
  for (Complex root : roots) found = found || std::abs(root - Complex(3.0, 0.0)) < 1e-10;
  CHECK(found);

  ProblemSpec trig;
  trig.g = parse_coeff("sin(w)");
  trig.f = {parse_coeff("1")};
  CHECK_THROWS_AS(sample_wt(mats, trig, 1, 17), std::invalid_argument);
}

TEST_CASE("resolvent_norm: diagonal examples") {
  ProblemSpec linear;
  linear.g = parse_coeff("0-w");
  linear.f = {parse_coeff("1")};
  const double diag[2] = {0.0, 1.0};
  const HermMatrix mats[1] = {HermMatrix::diagonal(std::span<const double>(diag, 2))};
  CHECK(resolvent_norm(mats, linear, Complex(2.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(resolvent_norm(mats, linear, Complex(1.0, 0.0)) == kInf);
  CHECK(resolvent_norm(mats, linear, Complex(0.5, 0.0)) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("resolvent_norm: bounded by the reciprocal least-squares value") {
  TestRng rng(97);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + rng.pick(3);
    const ProblemSpec spec = testsupport::random_poly_spec(rng, n);
    std::vector<HermMatrix> mats;
    std::vector<Interval> axes;
    for (int j = 0; j < n; ++j) {
      mats.push_back(testsupport::random_herm(rng, 4));
      axes.push_back(numerical_range_interval(mats.back()));
    }
    const Region region(axes);
    const Complex w = rng.complex_in(4.0);
    const double eps = eps_omega(spec, region, w).eps;
    if (eps <= 1e-6) continue;
    const double norm = resolvent_norm(mats, spec, w);
    CHECK(norm * eps <= 1.0 + 1e-6);
  }
}

TEST_CASE("apply_borel: frozen examples") {
  const HermMatrix a1 = testsupport::example_a1();
  const HermMatrix za1 = apply_borel(a1, testsupport::z_bound);
  const double expected[4] = {0.0, 1.0, 1.0, 0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(za1.at(i, j) - Complex(i == j ? expected[i] : 0.0)) <= 1e-10);

  const HermMatrix a2 = testsupport::example_a2();
  const HermMatrix same = apply_borel(a2, [](double x) { return x; });
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(same.at(i, j) - a2.at(i, j)) <= 1e-10);

  // the antidiagonal flip squares to the identity
  const HermMatrix squared = apply_borel(a2, [](double x) { return x * x; });
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(squared.at(i, j) - Complex(i == j ? 1.0 : 0.0)) <= 1e-10);
}

TEST_CASE("jacobi_eigen: diagonalizes random Hermitian matrices") {
  TestRng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + rng.pick(11);
    const HermMatrix a = testsupport::random_herm(rng, dim);
    const Eigensystem sys = jacobi_eigen(a);
    REQUIRE(static_cast<int>(sys.values.size()) == dim);
    CHECK(std::is_sorted(sys.values.begin(), sys.values.end()));

    // A v_k = lambda_k v_k and V unitary
    for (int k = 0; k < dim; ++k) {
      std::vector<Complex> v(dim);
      for (int i = 0; i < dim; ++i) v[i] = sys.vector_at(i, k);
      const std::vector<Complex> av = a.apply(v);
      double residual = 0.0;
      double vnorm = 0.0;
      for (int i = 0; i < dim; ++i) {
        residual += std::norm(av[i] - sys.values[k] * v[i]);
        vnorm += std::norm(v[i]);
      }
      CHECK(std::sqrt(residual) <= 1e-10 * (1.0 + std::abs(sys.values[k])));
      CHECK(std::sqrt(vnorm) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: spectral mapping of apply_borel") {
  TestRng rng(103);
  for (int trial = 0; trial < 15; ++trial) {
    const int dim = 2 + rng.pick(7);
    const HermMatrix a = testsupport::random_herm(rng, dim);
    const auto y = [](double x) { return std::exp(0.3 * x) - x; };
    const HermMatrix mapped = apply_borel(a, y);

    std::vector<double> expected = jacobi_eigen(a).values;
    for (double& v : expected) v = y(v);
    std::sort(expected.begin(), expected.end());
    const std::vector<double> actual = jacobi_eigen(mapped).values;
    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i)
      CHECK(std::abs(actual[i] - expected[i]) <= 1e-10 * (1.0 + std::abs(expected[i])));
  }
}

TEST_CASE("hermiticity is verified at construction") {
  std::vector<Complex> bad{Complex(0.0), Complex(1.0), Complex(2.0), Complex(0.0)};
  CHECK_THROWS_AS(HermMatrix(2, bad), std::invalid_argument);
  std::vector<Complex> complex_diag{Complex(0.0, 1.0)};
  CHECK_THROWS_AS(HermMatrix(1, complex_diag), std::invalid_argument);
}

TEST_CASE("matrix csv round trip") {
  TestRng rng(107);
  const HermMatrix a = testsupport::random_herm(rng, 5);
  const std::string path = "oracle_matrix_roundtrip.csv";
  write_matrix_csv(a, path);
  const HermMatrix b = read_matrix_csv(path);
  REQUIRE(b.dim() == a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) CHECK(a.at(i, j) == b.at(i, j));
  std::remove(path.c_str());
}
