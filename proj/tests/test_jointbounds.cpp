#include <cmath>

#include "doctest.h"

#include "specrange/jointbounds.hpp"
#include "specrange/oracle.hpp"
#include "test_support.hpp"

using namespace specrange;
using testsupport::TestRng;

namespace {

EnvelopeSource identity_source(int axis) {
  EnvelopeSource source;
  source.axis = axis;
  source.samples = {{0.0, 0.0}, {1.0, 1.0}};
  return source;
}

EnvelopeSource sampled_source(int axis, const std::function<double(double)>& y, double a,
                              double b, int count = 1024) {
  EnvelopeSource source;
  source.axis = axis;
  source.samples = sample_function(y, a, b, count);
  return source;
}

}  // namespace

TEST_CASE("relation_constraint: identity relation carves alpha2 <= alpha1") {
  const std::vector<Interval> box{Interval{0.0, kInf}, Interval{0.0, kInf}};
  RelationSpec spec;
  spec.target = 1;
  spec.dir = ScalarConstraint::Dir::Le;
  spec.terms = {identity_source(0)};
  const ScalarConstraint constraint = relation_constraint(spec, box);

  const double inside[2] = {1.5, 1.0};
  const double outside[2] = {1.0, 1.5};
  CHECK(constraint.satisfied(inside));
  CHECK(!constraint.satisfied(outside));
  // far beyond the sample range the linear extension keeps the identity
  const double far[2] = {1e7, 9.9e6};
  CHECK(constraint.satisfied(far));
}

TEST_CASE("relation_constraint: chord of x^2 on [0,1] is the identity line") {
  const std::vector<Interval> box{Interval{0.0, 1.0}, Interval{0.0, 1.0}};
  RelationSpec spec;
  spec.target = 1;
  spec.dir = ScalarConstraint::Dir::Le;
  spec.terms = {sampled_source(0, [](double x) { return x * x; }, 0.0, 1.0)};
  const ScalarConstraint upper = relation_constraint(spec, box);
  const double p1[2] = {0.5, 0.49};
  const double p2[2] = {0.5, 0.51};
  CHECK(upper.satisfied(p1));
  CHECK(!upper.satisfied(p2));

  spec.dir = ScalarConstraint::Dir::Ge;
  const ScalarConstraint lower = relation_constraint(spec, box);
  // lower envelope of a convex function is the function itself
  const double p3[2] = {0.5, 0.26};
  const double p4[2] = {0.5, 0.24};
  CHECK(lower.satisfied(p3));
  CHECK(!lower.satisfied(p4));
}

TEST_CASE("relation_constraint: input validation") {
  const std::vector<Interval> box{Interval{0.0, 1.0}, Interval{0.0, 1.0}};
  RelationSpec empty;
  empty.target = 1;
  CHECK_THROWS_AS(relation_constraint(empty, box), std::invalid_argument);

  RelationSpec self;
  self.target = 0;
  self.terms = {identity_source(0)};
  CHECK_THROWS_AS(relation_constraint(self, box), std::invalid_argument);
}

TEST_CASE("domination_constraint: gamma = 0 single identity term") {
  const std::vector<Interval> box{Interval{0.0, 4.0}, Interval{-4.0, 4.0}};
  DominationSpec spec;
  spec.target = 1;
  spec.gamma = 0.0;
  spec.terms = {sampled_source(0, [](double x) { return x; }, 0.0, 4.0, 8)};
  const auto [upper, lower] = domination_constraint(spec, box);

  const double ok[2] = {2.0, -1.9};
  const double bad_low[2] = {2.0, -2.1};
  const double bad_high[2] = {2.0, 2.1};
  CHECK((upper.satisfied(ok) && lower.satisfied(ok)));
  CHECK(!lower.satisfied(bad_low));
  CHECK(!upper.satisfied(bad_high));
}

TEST_CASE("domination bound arithmetic") {
  // (gamma^{2/3} + sum t^{2/3})^{3/2}
  const double single[1] = {5.0};
  CHECK(bound_from_norm_inequality(0.0, single) == doctest::Approx(5.0).epsilon(1e-12));
  const double pair[2] = {1.0, 1.0};
  CHECK(bound_from_norm_inequality(0.0, pair) ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(bound_from_norm_inequality(2.0, {}) == doctest::Approx(2.0).epsilon(1e-12));
  const double eight[1] = {8.0};
  CHECK(bound_from_norm_inequality(1.0, eight) ==
        doctest::Approx(std::pow(5.0, 1.5)).epsilon(1e-12));
  CHECK(std::pow(5.0, 1.5) == doctest::Approx(11.180339887498949));

  CHECK_THROWS_AS(bound_from_norm_inequality(-1.0, single), std::invalid_argument);
  const double neg[1] = {-0.1};
  CHECK_THROWS_AS(bound_from_norm_inequality(0.0, neg), std::invalid_argument);
}

TEST_CASE("oracle soundness: chord constraint holds on sampled joint ranges") {
  TestRng rng(301);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = 3 + rng.pick(4);
    const HermMatrix a1 = testsupport::random_herm(rng, dim);
    // a convex polynomial of a1, realized spectrally
    const auto y = [](double x) { return x * x + 0.5 * x; };
    const HermMatrix a2 = apply_borel(a1, y);

    const Interval range = numerical_range_interval(a1);
    const std::vector<Interval> box{range, numerical_range_interval(a2)};

    RelationSpec spec;
    spec.target = 1;
    spec.dir = ScalarConstraint::Dir::Le;
    spec.terms = {sampled_source(0, y, range.lo, range.hi)};
    const ScalarConstraint constraint = relation_constraint(spec, box);

    int violations = 0;
    const HermMatrix mats[2] = {a1, a2};
    for (const auto& point : sample_joint_range(mats, 10000, 42 + trial))
      if (!constraint.satisfied(point, 1e-9)) ++violations;
    CHECK(violations == 0);
  }
}

TEST_CASE("domination soundness: |<Bu,u>| <= <A1 u,u> when ||Bu|| <= ||A1 u||") {
  TestRng rng(313);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = 3 + rng.pick(4);
    HermMatrix a1_raw = testsupport::random_herm(rng, dim);
    // shift to a positive matrix
    const Interval raw_range = numerical_range_interval(a1_raw);
    const double shift = std::max(0.0, -raw_range.lo) + 0.1;
    std::vector<Complex> shifted = a1_raw.entries();
    for (int i = 0; i < dim; ++i) shifted[static_cast<std::size_t>(i) * dim + i] += shift;
    const HermMatrix a1(dim, shifted);

    // B with the same eigenbasis and |b_i| <= lambda_i enforces ||Bu|| <= ||A1 u||
    const Eigensystem sys = jacobi_eigen(a1);
    std::vector<Complex> b(static_cast<std::size_t>(dim) * dim, Complex(0.0));
    std::vector<double> scale(dim);
    for (int i = 0; i < dim; ++i) scale[i] = sys.values[i] * rng.uniform(-1.0, 1.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        Complex acc(0.0);
        for (int k = 0; k < dim; ++k)
          acc += sys.vector_at(i, k) * scale[k] * std::conj(sys.vector_at(j, k));
        b[static_cast<std::size_t>(i) * dim + j] = acc;
      }
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        const Complex sym = 0.5 * (b[static_cast<std::size_t>(i) * dim + j] +
                                   std::conj(b[static_cast<std::size_t>(j) * dim + i]));
        b[static_cast<std::size_t>(i) * dim + j] = sym;
        b[static_cast<std::size_t>(j) * dim + i] = std::conj(sym);
      }
    const HermMatrix bmat(dim, b);

    const HermMatrix mats[2] = {a1, bmat};
    int violations = 0;
    for (const auto& point : sample_joint_range(mats, 5000, 99 + trial))
      if (std::abs(point[1]) > point[0] + 1e-9) ++violations;
    CHECK(violations == 0);
  }
}

TEST_CASE("example pair: sampled joint range respects the optimized bound") {
  const HermMatrix mats[2] = {testsupport::example_a1(), testsupport::example_a2()};
  int violations = 0;
  for (const auto& point : sample_joint_range(mats, 10000, 7)) {
    if (std::abs(point[1]) > testsupport::z_bound(point[0]) + 1e-9) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("example pair: the intersection bound is not a single-function bound") {
  const HermMatrix a1 = testsupport::example_a1();
  const HermMatrix a2 = testsupport::example_a2();
  const HermMatrix za1 = apply_borel(a1, testsupport::z_bound);

  std::vector<Complex> u(4, Complex(0.0));
  u[0] = u[3] = 1.0 / std::sqrt(2.0);
  const double z_form = za1.quadratic_form(u);
  const double a2_form = a2.quadratic_form(u);
  CHECK(z_form == doctest::Approx(0.0).scale(1.0));
  CHECK(a2_form == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z_form < a2_form);
}
