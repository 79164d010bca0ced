#pragma once

#include <span>
#include <utility>
#include <vector>

#include "specrange/region.hpp"

namespace specrange {

/// Source data for one envelope term conv y_j(alpha_j): explicit samples of
/// y_j over the axis interval, or the unbounded-above case.
struct EnvelopeSource {
  int axis = 0;
  std::vector<std::pair<double, double>> samples;
  bool unbounded = false;
};

/// <A_k u, u> <= / >= sum_{j in M} y_j(<A_j u, u>) + offset, transferred to
/// the joint-range coordinates through convex-hull envelopes.
struct RelationSpec {
  int target = 0;
  ScalarConstraint::Dir dir = ScalarConstraint::Dir::Le;
  double offset = 0.0;
  std::vector<EnvelopeSource> terms;
};

/// ||A_k u|| <= gamma ||u|| + sum_{j in M} ||y_j(A_j) u||, transferred to
/// |alpha_k| <= (gamma^{2/3} + sum conv y_j(alpha_j)^{2/3})^{3/2}.
struct DominationSpec {
  int target = 0;
  double gamma = 0.0;
  std::vector<EnvelopeSource> terms;
};

/// Builds the constraint of the relation: upper envelopes for <=, lower
/// envelopes for >=. Throws if an envelope interval does not cover its axis.
ScalarConstraint relation_constraint(const RelationSpec& spec,
                                     const std::vector<Interval>& box);

/// Builds the pair alpha_k <= B(alpha), alpha_k >= -B(alpha) with the
/// norm-domination bound B. Envelopes must be nonnegative.
std::pair<ScalarConstraint, ScalarConstraint> domination_constraint(
    const DominationSpec& spec, const std::vector<Interval>& box);

/// (gamma^{2/3} + sum t_j^{2/3})^{3/2} for nonnegative inputs.
double bound_from_norm_inequality(double gamma, std::span<const double> terms);

}  // namespace specrange
