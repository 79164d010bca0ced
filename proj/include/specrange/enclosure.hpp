#pragma once

#include <optional>
#include <vector>

#include "specrange/coeffs.hpp"
#include "specrange/pseudo.hpp"
#include "specrange/region.hpp"

namespace specrange {

enum class Status { Inside, Outside, BoundaryCandidate, Undefined };
enum class Branch { CrUnique, CiLine, GeneralRank };

inline constexpr double kWitnessTol = 1e-8;

struct MembershipResult {
  Status status = Status::Undefined;
  std::optional<std::vector<double>> witness;
  Branch branch = Branch::GeneralRank;
  // |t_alpha(omega)| at the witness / minimizer when computed, else NaN.
  double eps = std::numeric_limits<double>::quiet_NaN();
};

/// n = 2, non-degenerate case: the unique solution
///   alpha* = (Im(f2 conj(g)), Im(conj(f1) g)) / Im(f1 conj(f2))
/// decides membership by a point-in-region test.
MembershipResult membership_n2(const ProblemSpec& spec, const Region& region,
                               Complex w, double tau = kWitnessTol);

/// n = 2, degenerate case: the solution set of F alpha = G is empty, a line,
/// or all of R^2; membership reduces to line/region intersection with the
/// witness searched on the slashed boundary.
MembershipResult membership_degenerate(const ProblemSpec& spec, const Region& region,
                                       Complex w, double tau = kWitnessTol);

/// Any n: inside iff eps_omega <= tau; eps in (tau, 10 tau] is reported as a
/// boundary candidate to acknowledge floating-point ambiguity.
MembershipResult membership_general(const ProblemSpec& spec, const Region& region,
                                    Complex w, double tau = kWitnessTol);

/// Dispatches to the n = 2 fast paths when applicable, otherwise the general
/// path.
MembershipResult membership(const ProblemSpec& spec, const Region& region, Complex w,
                            double tau = kWitnessTol);

/// True iff the (n-2)-skeleton of the box carries a solution:
/// min over skeleton faces of the face-restricted least squares <= tau.
bool boundary_candidate(const ProblemSpec& spec, const Region& region, Complex w,
                        double tau = kWitnessTol);

}  // namespace specrange
