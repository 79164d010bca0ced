#include <cmath>

#include "doctest.h"

#include "specrange/enclosure.hpp"
#include "specrange/oracle.hpp"
#include "test_support.hpp"

using namespace specrange;
using testsupport::TestRng;

namespace {

ProblemSpec sadex_spec() {
  ProblemSpec spec;
  spec.g = parse_coeff("w^2-1");
  spec.f = {parse_coeff("0-2*w"), parse_coeff("2")};
  return spec;
}

Region quadrant() { return Region({Interval{0.0, kInf}, Interval{0.0, kInf}}); }

Region carved_quadrant() {
  Region region = quadrant();
  ScalarConstraint c;
  c.target = 1;
  c.dir = ScalarConstraint::Dir::Le;
  EnvelopeFn identity;
  identity.kind = EnvelopeFn::Kind::Upper;
  identity.domain = Interval{0.0, kInf};
  identity.breakpoints = {{0.0, 0.0}, {1.0, 1.0}};
  c.terms.push_back({0, identity});
  region.constraints.push_back(std::move(c));
  return region;
}

ProblemSpec cube_spec() {
  ProblemSpec spec;
  spec.g = parse_coeff("w^3");
  spec.f = {parse_coeff("w^2"), parse_coeff("w"), parse_coeff("1")};
  return spec;
}

void check_witness(const ProblemSpec& spec, const Region& region,
                   const MembershipResult& result, Complex w, double tau) {
  REQUIRE(result.witness.has_value());
  CHECK(contains(region, *result.witness, 1e-6));
  CHECK(std::abs(eval_t(spec, *result.witness, w)) <= tau * 10.0);
}

}  // namespace

TEST_CASE("membership_n2: unique solution against box and carved region") {
  const ProblemSpec spec = sadex_spec();
  const Complex w(1.0, 1.0);

  const MembershipResult box_result = membership_n2(spec, quadrant(), w);
  CHECK(box_result.status == Status::Inside);
  CHECK(box_result.branch == Branch::CrUnique);
  REQUIRE(box_result.witness.has_value());
  CHECK((*box_result.witness)[0] == doctest::Approx(1.0));
  CHECK((*box_result.witness)[1] == doctest::Approx(1.5));
  check_witness(spec, quadrant(), box_result, w, kWitnessTol);

  const MembershipResult carved_result = membership_n2(spec, carved_quadrant(), w);
  CHECK(carved_result.status == Status::Outside);

  // identity system with solution (3, 4) outside the unit square
  ProblemSpec ident;
  ident.g = parse_coeff("0-3-4*i");
  ident.f = {parse_coeff("1"), parse_coeff("i")};
  const Region square({Interval{0.0, 1.0}, Interval{0.0, 1.0}});
  CHECK(membership_n2(ident, square, Complex(0.2, -1.0)).status == Status::Outside);

  CHECK_THROWS_AS(membership_n2(spec, quadrant(), Complex(-0.5, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("membership_degenerate: line solutions on the real axis") {
  const ProblemSpec spec = sadex_spec();

  const MembershipResult inside = membership_degenerate(spec, quadrant(), Complex(-0.5, 0.0));
  CHECK(inside.status == Status::Inside);
  CHECK(inside.branch == Branch::CiLine);
  check_witness(spec, quadrant(), inside, Complex(-0.5, 0.0), kWitnessTol);

  const MembershipResult outside = membership_degenerate(spec, quadrant(), Complex(-2.0, 0.0));
  CHECK(outside.status == Status::Outside);

  const MembershipResult at_one = membership_degenerate(spec, quadrant(), Complex(1.0, 0.0));
  CHECK(at_one.status == Status::Inside);
  check_witness(spec, quadrant(), at_one, Complex(1.0, 0.0), kWitnessTol);

  CHECK_THROWS_AS(membership_degenerate(spec, quadrant(), Complex(1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("membership_general: cube problem") {
  const Region cube({Interval{0.0, 1.0}, Interval{0.0, 1.0}, Interval{0.0, 1.0}});

  const MembershipResult inside = membership_general(cube_spec(), cube, Complex(0.0, 0.5));
  CHECK(inside.status == Status::Inside);
  check_witness(cube_spec(), cube, inside, Complex(0.0, 0.5), kWitnessTol);

  const MembershipResult outside = membership_general(cube_spec(), cube, Complex(10.0, 0.0));
  CHECK(outside.status == Status::Outside);

  ProblemSpec linear;
  linear.g = parse_coeff("0-w");
  linear.f = {parse_coeff("1")};
  const Region segment({Interval{0.0, 1.0}});
  CHECK(membership_general(linear, segment, Complex(0.5, 0.0)).status == Status::Inside);
}

TEST_CASE("boundary_candidate: spec examples") {
  const Region cube({Interval{0.0, 1.0}, Interval{0.0, 1.0}, Interval{0.0, 1.0}});
  CHECK(boundary_candidate(cube_spec(), cube, Complex(0.0, 0.5)));

  CHECK(!boundary_candidate(sadex_spec(), quadrant(), Complex(1.0, 1.0)));

  ProblemSpec ident;
  ident.g = parse_coeff("0-0.5-0.5*i");
  ident.f = {parse_coeff("1"), parse_coeff("i")};
  const Region square({Interval{0.0, 1.0}, Interval{0.0, 1.0}});
  CHECK(!boundary_candidate(ident, square, Complex(0.3, 0.3)));

  CHECK_THROWS_AS(boundary_candidate(sadex_spec(), carved_quadrant(), Complex(1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("property: fast path and general path agree off the degenerate set") {
  TestRng rng(71);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const ProblemSpec spec = testsupport::random_poly_spec(rng, 2);
    std::vector<Interval> axes;
    for (int j = 0; j < 2; ++j) {
      const double lo = rng.uniform(-2.0, 0.5);
      axes.push_back(rng.pick(3) == 0 ? Interval{lo, kInf}
                                      : Interval{lo, lo + rng.uniform(0.5, 3.0)});
    }
    const Region region(axes);
    const Complex w = rng.complex_in(2.0);
    if (classify_degeneracy(spec, w) != DegeneracyClass::Cr) continue;
    ++compared;
    const MembershipResult fast = membership_n2(spec, region, w);
    const MembershipResult general = membership_general(spec, region, w);
    if (general.status == Status::BoundaryCandidate) continue;  // ambiguity band
    CHECK(fast.status == general.status);
  }
  CHECK(compared > 200);
}

TEST_CASE("property: membership is monotone in the region") {
  TestRng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.pick(3);
    const ProblemSpec spec = testsupport::random_poly_spec(rng, n);
    std::vector<Interval> small_axes, big_axes;
    for (int j = 0; j < n; ++j) {
      const double lo = rng.uniform(-2.0, 0.5);
      const double hi = lo + rng.uniform(0.3, 2.0);
      small_axes.push_back(Interval{lo, hi});
      big_axes.push_back(Interval{lo - rng.uniform(0.0, 1.0), hi + rng.uniform(0.0, 1.0)});
    }
    const Complex w = rng.complex_in(2.0);
    const MembershipResult small_result =
        membership_general(spec, Region(small_axes), w);
    if (small_result.status == Status::Inside)
      CHECK(membership_general(spec, Region(big_axes), w).status == Status::Inside);
  }
}

TEST_CASE("property: oracle roots always land inside the box enclosure") {
  TestRng rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + rng.pick(3);
    const int dim = 2 + rng.pick(5);
    const ProblemSpec spec = testsupport::random_poly_spec(rng, n);
    std::vector<HermMatrix> mats;
    std::vector<Interval> axes;
    for (int j = 0; j < n; ++j) {
      mats.push_back(testsupport::random_herm(rng, dim));
      axes.push_back(numerical_range_interval(mats.back()));
    }
    const Region region(axes);
    const auto roots = sample_wt(mats, spec, 40, 1000 + trial);
    int violations = 0;
    for (Complex root : roots) {
      const MembershipResult m = membership_general(spec, region, root);
      if (m.status == Status::Outside) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("property: full membership equals vertex-skeleton membership for n = 3") {
  // the n-3 skeleton of a 3-box is its slashed boundary (m = 0)
  TestRng rng(83);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const ProblemSpec spec = testsupport::random_poly_spec(rng, 3);
    std::vector<Interval> axes;
    for (int j = 0; j < 3; ++j) {
      const double lo = rng.uniform(-1.5, 0.5);
      axes.push_back(Interval{lo, lo + rng.uniform(0.3, 2.0)});
    }
    const Region region(axes);
    for (int k = 0; k < 40; ++k) {
      const Complex w = rng.complex_in(2.0);
      const double full = eps_omega(spec, region, w).eps;
      const double skel = eps_on_skeleton(spec, region, 0, w).eps;
      const bool inside_full = full <= 1e-8;
      const bool inside_skel = skel <= 1e-8;
      CHECK(inside_full == inside_skel);
      ++checked;
    }
  }
  CHECK(checked == 1200);
}
