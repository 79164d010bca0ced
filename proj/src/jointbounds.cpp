#include "specrange/jointbounds.hpp"

#include <cmath>
#include <stdexcept>

namespace specrange {

namespace {

Interval axis_interval(const std::vector<Interval>& box, int axis) {
  if (axis < 0 || axis >= static_cast<int>(box.size()))
    throw std::invalid_argument("envelope axis out of range");
  return box[axis];
}

void check_covers(const EnvelopeSource& source, const Interval& axis) {
  if (source.unbounded || source.samples.empty()) return;
  // Bounded axes must be sampled end to end; beyond the samples only the
  // linear end-segment extension speaks for the data.
  const double slack = 1e-9 * (1.0 + std::abs(axis.lo) + std::abs(axis.hi));
  if ((axis.lo_finite() && source.samples.front().first > axis.lo + slack) ||
      (axis.hi_finite() && source.samples.back().first < axis.hi - slack)) {
    if (axis.bounded())
      throw std::invalid_argument("envelope samples do not cover the region axis");
  }
}

EnvelopeFn build_envelope(const EnvelopeSource& source, const Interval& axis,
                          EnvelopeFn::Kind kind) {
  check_covers(source, axis);
  if (kind == EnvelopeFn::Kind::Upper) return upper_envelope(source.samples, axis, source.unbounded);
  if (source.unbounded) {
    EnvelopeFn env;
    env.kind = EnvelopeFn::Kind::Lower;
    env.domain = axis;
    env.infinite = true;
    return env;
  }
  return lower_envelope(source.samples, axis);
}

}  // namespace

ScalarConstraint relation_constraint(const RelationSpec& spec,
                                     const std::vector<Interval>& box) {
  if (spec.terms.empty()) throw std::invalid_argument("relation needs a nonempty index set");
  ScalarConstraint constraint;
  constraint.target = spec.target;
  constraint.dir = spec.dir;
  constraint.combine = ScalarConstraint::Combine::Sum;
  constraint.offset = spec.offset;
  const EnvelopeFn::Kind kind = spec.dir == ScalarConstraint::Dir::Le
                                    ? EnvelopeFn::Kind::Upper
                                    : EnvelopeFn::Kind::Lower;
  for (const auto& source : spec.terms) {
    if (source.axis == spec.target)
      throw std::invalid_argument("relation target cannot appear in its own index set");
    const Interval axis = axis_interval(box, source.axis);
    constraint.terms.push_back({source.axis, build_envelope(source, axis, kind)});
  }
  return constraint;
}

std::pair<ScalarConstraint, ScalarConstraint> domination_constraint(
    const DominationSpec& spec, const std::vector<Interval>& box) {
  if (spec.gamma < 0.0) throw std::invalid_argument("negative gamma");
  if (spec.terms.empty()) throw std::invalid_argument("domination needs a nonempty index set");
  ScalarConstraint upper;
  upper.target = spec.target;
  upper.dir = ScalarConstraint::Dir::Le;
  upper.combine = ScalarConstraint::Combine::NormBound;
  upper.gamma = spec.gamma;
  for (const auto& source : spec.terms) {
    if (source.axis == spec.target)
      throw std::invalid_argument("domination target cannot appear in its own index set");
    const Interval axis = axis_interval(box, source.axis);
    EnvelopeFn env = build_envelope(source, axis, EnvelopeFn::Kind::Upper);
    if (!env.infinite && env.min_breakpoint_value() < 0.0)
      throw std::domain_error("negative envelope value in domination constraint");
    upper.terms.push_back({source.axis, std::move(env)});
  }
  ScalarConstraint lower = upper;
  lower.dir = ScalarConstraint::Dir::Ge;
  lower.negate_bound = true;
  return {std::move(upper), std::move(lower)};
}

double bound_from_norm_inequality(double gamma, std::span<const double> terms) {
  if (gamma < 0.0) throw std::invalid_argument("negative gamma");
  double acc = std::pow(gamma, 2.0 / 3.0);
  for (double t : terms) {
    if (t < 0.0) throw std::invalid_argument("negative norm term");
    acc += std::pow(t, 2.0 / 3.0);
  }
  return std::pow(acc, 1.5);
}

}  // namespace specrange
