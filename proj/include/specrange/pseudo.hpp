#pragma once

#include <vector>

#include "specrange/coeffs.hpp"
#include "specrange/region.hpp"

namespace specrange {

/// Result of minimizing ||F alpha - G|| over a region.
struct LsqResult {
  double eps = 0.0;
  std::vector<double> argmin;
  bool attained = true;
  // True when the value is the certified global minimum (box and skeleton
  // solves). Carved-region solves are heuristic multi-start and not certified.
  bool certified = true;
  int iterations = 0;
  double kkt_residual = 0.0;  // box solves only
};

inline constexpr double kSolverTol = 1e-10;

/// Global minimum of ||F alpha - G||_2 over a box, by exact coordinate and
/// coordinate-pair descent from the clamped unconstrained solution. The
/// objective is convex and the feasible set is a box, so the KKT point
/// reached is the global minimum; the KKT residual is reported.
LsqResult solve_box_lsq(const LinearSystem& sys, const std::vector<Interval>& box);

/// eps_omega = inf over Omega of |t_alpha(omega)| = inf ||F alpha - G||.
/// Boxes are solved to certified global optimality; carved regions use
/// multi-start projected descent and are flagged non-certified.
LsqResult eps_omega(const ProblemSpec& spec, const Region& region, Complex w);

/// Resolvent estimate 1/eps_omega; +inf when eps_omega = 0 (no bound).
double resolvent_bound(const ProblemSpec& spec, const Region& region, Complex w);

/// omega in the eps-pseudonumerical-range enclosure iff eps_omega < eps
/// (strict).
bool pseudo_membership(const ProblemSpec& spec, const Region& region, Complex w,
                       double eps);

/// Minimum of the face-restricted least squares over the m-skeleton of a box
/// region; m = -1 reduces to eps_omega.
LsqResult eps_on_skeleton(const ProblemSpec& spec, const Region& region, int m,
                          Complex w);

}  // namespace specrange
