#include "specrange/enclosure.hpp"

#include <cmath>
#include <stdexcept>

namespace specrange {

namespace {

// Feasible point of the region near the origin, for the F = 0, G = 0 case.
std::optional<std::vector<double>> any_region_point(const Region& region) {
  std::vector<double> alpha(region.dim());
  for (int j = 0; j < region.dim(); ++j) alpha[j] = region.box[j].clamp(0.0);
  for (int pass = 0; pass < 8; ++pass) {
    bool ok = true;
    for (const auto& constraint : region.constraints) {
      const double bound = constraint.bound_at(alpha);
      if (constraint.dir == ScalarConstraint::Dir::Le) {
        if (bound != kInf && alpha[constraint.target] > bound) {
          alpha[constraint.target] = region.box[constraint.target].clamp(bound);
          ok = false;
        }
      } else {
        if (bound != -kInf && alpha[constraint.target] < bound) {
          alpha[constraint.target] = region.box[constraint.target].clamp(bound);
          ok = false;
        }
      }
    }
    if (ok) break;
  }
  if (contains(region, alpha)) return alpha;
  return std::nullopt;
}

}  // namespace

MembershipResult membership_n2(const ProblemSpec& spec, const Region& region,
                               Complex w, double tau) {
  if (spec.n() != 2) throw std::invalid_argument("membership_n2 requires n = 2");
  const LinearSystem sys = linearize(spec, w);
  if (classify_degeneracy(sys) != DegeneracyClass::Cr)
    throw std::invalid_argument("membership_n2 called at a degenerate point");

  const Complex f1 = spec.f[0].eval(w);
  const Complex f2 = spec.f[1].eval(w);
  const Complex g = spec.g.eval(w);
  const double denom = std::imag(f1 * std::conj(f2));
  const std::vector<double> alpha{std::imag(f2 * std::conj(g)) / denom,
                                  std::imag(std::conj(f1) * g) / denom};

  MembershipResult result;
  result.branch = Branch::CrUnique;
  result.eps = std::abs(sys.residual(alpha));
  if (contains(region, alpha)) {
    result.status = Status::Inside;
    result.witness = alpha;
  } else {
    result.status = Status::Outside;
  }
  (void)tau;
  return result;
}

MembershipResult membership_degenerate(const ProblemSpec& spec, const Region& region,
                                       Complex w, double tau) {
  if (spec.n() != 2) throw std::invalid_argument("membership_degenerate requires n = 2");
  const LinearSystem sys = linearize(spec, w);
  if (classify_degeneracy(sys) != DegeneracyClass::Ci)
    throw std::invalid_argument("membership_degenerate called at a non-degenerate point");

  MembershipResult result;
  result.branch = Branch::CiLine;

  const double c1x = sys.at(0, 0), c1y = sys.at(1, 0);
  const double c2x = sys.at(0, 1), c2y = sys.at(1, 1);
  const double g_norm = std::hypot(sys.G[0], sys.G[1]);
  const double f_scale =
      std::max(std::hypot(c1x, c1y), std::hypot(c2x, c2y));

  if (f_scale <= tau * (1.0 + g_norm)) {
    // F = 0: t_alpha(w) = -G for every alpha
    result.eps = g_norm;
    if (g_norm <= tau) {
      result.status = Status::Inside;
      result.witness = any_region_point(region);
    } else {
      result.status = Status::Outside;
    }
    return result;
  }

  // rank 1: the image is spanned by v; consistency requires G parallel to v
  const bool first_bigger = std::hypot(c1x, c1y) >= std::hypot(c2x, c2y);
  const double vx = first_bigger ? c1x : c2x;
  const double vy = first_bigger ? c1y : c2y;
  const double v_norm2 = vx * vx + vy * vy;
  const double ortho = std::abs(vx * sys.G[1] - vy * sys.G[0]) / std::sqrt(v_norm2);
  if (ortho > tau * (1.0 + g_norm)) {
    result.status = Status::Outside;
    result.eps = ortho;
    return result;
  }

  // solution line: w1 alpha1 + w2 alpha2 = gamma in the v coordinate
  const double w1 = (c1x * vx + c1y * vy) / v_norm2;
  const double w2 = (c2x * vx + c2y * vy) / v_norm2;
  const double gamma = (sys.G[0] * vx + sys.G[1] * vy) / v_norm2;
  const double w_norm2 = w1 * w1 + w2 * w2;
  const std::vector<double> base{gamma * w1 / w_norm2, gamma * w2 / w_norm2};
  const std::vector<double> dir{-w2, w1};

  const auto witness = line_region_point(region, base, dir);
  if (witness) {
    result.status = Status::Inside;
    result.eps = std::abs(sys.residual(*witness));
    result.witness = *witness;
  } else {
    result.status = Status::Outside;
  }
  return result;
}

MembershipResult membership_general(const ProblemSpec& spec, const Region& region,
                                    Complex w, double tau) {
  MembershipResult result;
  result.branch = Branch::GeneralRank;
  LsqResult lsq = eps_omega(spec, region, w);
  result.eps = lsq.eps;
  if (lsq.eps <= tau) {
    result.status = Status::Inside;
    result.witness = std::move(lsq.argmin);
  } else if (lsq.eps <= 10.0 * tau) {
    result.status = Status::BoundaryCandidate;
    result.witness = std::move(lsq.argmin);
  } else {
    result.status = Status::Outside;
  }
  return result;
}

MembershipResult membership(const ProblemSpec& spec, const Region& region, Complex w,
                            double tau) {
  if (spec.n() == 2) {
    if (classify_degeneracy(spec, w) == DegeneracyClass::Cr)
      return membership_n2(spec, region, w, tau);
    return membership_degenerate(spec, region, w, tau);
  }
  return membership_general(spec, region, w, tau);
}

bool boundary_candidate(const ProblemSpec& spec, const Region& region, Complex w,
                        double tau) {
  if (region.carved())
    throw std::invalid_argument("boundary_candidate requires a box region");
  if (!spec.holomorphic_independent)
    throw std::invalid_argument(
        "boundary_candidate requires the holomorphic/independent flag");
  return eps_on_skeleton(spec, region, spec.n() - 2, w).eps <= tau;
}

}  // namespace specrange
