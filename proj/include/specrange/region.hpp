#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specrange/envelope.hpp"
#include "specrange/interval.hpp"

namespace specrange {

/// One scalar inequality carving the box: the target coordinate is bounded
/// by a combination of envelope values of the other coordinates.
///
/// Sum mode:     alpha_k <= / >= offset + sum_j env_j(alpha_j)
/// NormBound:    alpha_k <= (gamma^{2/3} + sum_j env_j(alpha_j)^{2/3})^{3/2}
///               (negate_bound flips the right-hand side's sign, giving the
///               lower half of |alpha_k| <= B)
struct ScalarConstraint {
  enum class Dir { Le, Ge };
  enum class Combine { Sum, NormBound };

  struct Term {
    int axis = 0;
    EnvelopeFn env;
  };

  int target = 0;
  Dir dir = Dir::Le;
  Combine combine = Combine::Sum;
  double offset = 0.0;
  double gamma = 0.0;  // NormBound only
  bool negate_bound = false;
  std::vector<Term> terms;

  /// Right-hand side value at alpha; +/-inf means the constraint is vacuous.
  double bound_at(std::span<const double> alpha) const;

  bool satisfied(std::span<const double> alpha, double tol = kEndpointTol) const;
};

/// Constraint region Omega in R^n: an axis box intersected with scalar
/// constraints. The represented set is closed by construction.
struct Region {
  std::vector<Interval> box;
  std::vector<ScalarConstraint> constraints;

  Region() = default;
  explicit Region(std::vector<Interval> axes) : box(std::move(axes)) {}

  int dim() const { return static_cast<int>(box.size()); }
  bool carved() const { return !constraints.empty(); }
};

/// One piece of a box skeleton: some coordinates fixed at finite endpoints,
/// the rest free on their (possibly split) intervals.
struct Face {
  std::vector<std::pair<int, double>> fixed;     // sorted by axis
  std::vector<std::pair<int, Interval>> free;    // sorted by axis

  bool operator==(const Face&) const = default;
};

bool contains(const Region& region, std::span<const double> alpha,
              double tol = kEndpointTol);

/// Membership in the slashed boundary: axes unbounded in both directions are
/// split at 0 and the point must lie on the topological boundary of the
/// sub-box containing it. Box-only.
bool slashed_boundary_contains(const Region& region, std::span<const double> alpha,
                               double tol = kEndpointTol);

/// Membership in the m-skeleton of a box: after the unbounded-axis split, at
/// least m+1 coordinates sit at finite endpoints. m = -1 is the region itself.
bool skeleton_contains(const Region& region, int m, std::span<const double> alpha,
                       double tol = kEndpointTol);

/// All faces with exactly m+1 coordinates fixed at finite endpoints of the
/// split sub-boxes; their union is the m-skeleton. m = -1 yields the single
/// all-free face.
std::vector<Face> skeleton_faces(const Region& region, int m);

/// Box superset of the l1 eps-neighborhood: each finite endpoint moved
/// outward by eps.
Region inflate_l1(const Region& region, double eps);

/// Whether the line {point + s * direction} intersects the region. Boxes are
/// clipped exactly (interval slabs); constraints are checked by sampling the
/// clipped parameter range and refining sign changes by bisection.
bool line_meets_region(const Region& region, std::span<const double> point,
                       std::span<const double> direction, double tol = kEndpointTol,
                       int resolution = 1024);

/// Parameter range of the line inside the box, or empty (first > second).
std::pair<double, double> clip_line_to_box(const std::vector<Interval>& box,
                                           std::span<const double> point,
                                           std::span<const double> direction,
                                           double tol = kEndpointTol);

/// A point of the line inside the region, if one exists. For boxes the point
/// is taken on the slashed boundary of the sub-box split when possible.
std::optional<std::vector<double>> line_region_point(const Region& region,
                                                     std::span<const double> point,
                                                     std::span<const double> direction,
                                                     double tol = kEndpointTol,
                                                     int resolution = 1024);

}  // namespace specrange
