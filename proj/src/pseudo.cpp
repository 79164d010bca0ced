#include "specrange/pseudo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace specrange {

namespace {

struct Col {
  double x = 0.0;
  double y = 0.0;
  double norm2() const { return x * x + y * y; }
};

double dot(const Col& a, const Col& b) { return a.x * b.x + a.y * b.y; }

struct BoxProblem {
  std::vector<Col> cols;
  std::array<double, 2> target{0.0, 0.0};
  std::vector<Interval> box;

  int n() const { return static_cast<int>(cols.size()); }

  Col residual(const std::vector<double>& alpha) const {
    Col r{-target[0], -target[1]};
    for (int j = 0; j < n(); ++j) {
      r.x += cols[j].x * alpha[j];
      r.y += cols[j].y * alpha[j];
    }
    return r;
  }
};

// Min-norm solution of the unconstrained 2 x n problem via the pseudoinverse
// of the 2x2 Gram matrix F F^T.
std::vector<double> min_norm_solution(const BoxProblem& p) {
  double a = 0.0, b = 0.0, c = 0.0;
  for (const Col& col : p.cols) {
    a += col.x * col.x;
    b += col.x * col.y;
    c += col.y * col.y;
  }
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(std::max(0.25 * (a - c) * (a - c) + b * b, 0.0));
  const double l1 = mean + disc;
  const double l2 = std::max(mean - disc, 0.0);
  // eigenvectors of [[a,b],[b,c]]
  auto eigvec = [&](double lambda) -> Col {
    Col v{b, lambda - a};
    if (v.norm2() < 1e-300) v = Col{lambda - c, b};
    if (v.norm2() < 1e-300) v = Col{1.0, 0.0};
    const double s = 1.0 / std::sqrt(v.norm2());
    return Col{v.x * s, v.y * s};
  };
  const double cutoff = 1e-13 * (l1 + 1e-300);
  Col pinv_g{0.0, 0.0};  // (F F^T)^+ G
  const Col g{p.target[0], p.target[1]};
  for (double lambda : {l1, l2}) {
    if (lambda <= cutoff) continue;
    const Col v = eigvec(lambda);
    const double coeff = dot(v, g) / lambda;
    pinv_g.x += coeff * v.x;
    pinv_g.y += coeff * v.y;
  }
  std::vector<double> alpha(p.n());
  for (int j = 0; j < p.n(); ++j) alpha[j] = dot(p.cols[j], pinv_g);
  return alpha;
}

double objective(const BoxProblem& p, const std::vector<double>& alpha) {
  const Col r = p.residual(alpha);
  return r.norm2();
}

// Exact minimization over one coordinate; returns the clamped optimum.
double coord_min(const BoxProblem& p, const Col& r_without, int j) {
  const Col& c = p.cols[j];
  const double n2 = c.norm2();
  if (n2 == 0.0) return p.box[j].clamp(0.0);
  return p.box[j].clamp(-dot(c, r_without) / n2);
}

// Exact minimization over a coordinate pair on its rectangle: unconstrained
// stationary point if feasible, otherwise the best of the edge optima.
void pair_min(const BoxProblem& p, std::vector<double>& alpha, int j, int k) {
  const Col& cj = p.cols[j];
  const Col& ck = p.cols[k];
  Col r = p.residual(alpha);
  // residual with the j,k contributions removed
  Col base{r.x - cj.x * alpha[j] - ck.x * alpha[k],
           r.y - cj.y * alpha[j] - ck.y * alpha[k]};

  const double hjj = cj.norm2();
  const double hkk = ck.norm2();
  const double hjk = dot(cj, ck);
  const double qj = -dot(cj, base);
  const double qk = -dot(ck, base);

  auto eval = [&](double a, double b) {
    const double rx = base.x + cj.x * a + ck.x * b;
    const double ry = base.y + cj.y * a + ck.y * b;
    return rx * rx + ry * ry;
  };

  double best_a = alpha[j], best_b = alpha[k];
  double best = eval(best_a, best_b);
  auto consider = [&](double a, double b) {
    if (!p.box[j].contains(a, 0.0) || !p.box[k].contains(b, 0.0)) return;
    const double v = eval(a, b);
    if (v < best) {
      best = v;
      best_a = a;
      best_b = b;
    }
  };

  const double det = hjj * hkk - hjk * hjk;
  if (det > 1e-14 * (hjj * hkk + 1e-300)) {
    consider((qj * hkk - qk * hjk) / det, (qk * hjj - qj * hjk) / det);
  }
  // edges: fix one coordinate at a finite bound, minimize the other exactly
  auto edge_b = [&](double a_fixed) {
    const double b =
        hkk == 0.0 ? p.box[k].clamp(0.0) : p.box[k].clamp((qk - hjk * a_fixed) / hkk);
    consider(a_fixed, b);
  };
  auto edge_a = [&](double b_fixed) {
    const double a =
        hjj == 0.0 ? p.box[j].clamp(0.0) : p.box[j].clamp((qj - hjk * b_fixed) / hjj);
    consider(a, b_fixed);
  };
  if (p.box[j].lo_finite()) edge_b(p.box[j].lo);
  if (p.box[j].hi_finite()) edge_b(p.box[j].hi);
  if (p.box[k].lo_finite()) edge_a(p.box[k].lo);
  if (p.box[k].hi_finite()) edge_a(p.box[k].hi);
  // parallel columns with unbounded rectangle: exact 1-D solves still apply
  if (!p.box[j].bounded() && !p.box[k].bounded()) {
    Col r_without_j{base.x + ck.x * alpha[k], base.y + ck.y * alpha[k]};
    const double a1 = coord_min(p, r_without_j, j);
    Col r_without_k{base.x + cj.x * a1, base.y + cj.y * a1};
    consider(a1, coord_min(p, r_without_k, k));
  }

  alpha[j] = best_a;
  alpha[k] = best_b;
}

double kkt_violation(const BoxProblem& p, const std::vector<double>& alpha) {
  const Col r = p.residual(alpha);
  double worst = 0.0;
  for (int j = 0; j < p.n(); ++j) {
    const double g = dot(p.cols[j], r);
    const Interval& axis = p.box[j];
    const bool at_lo = axis.lo_finite() && alpha[j] == axis.lo;
    const bool at_hi = axis.hi_finite() && alpha[j] == axis.hi;
    double v;
    if (at_lo && at_hi)
      v = 0.0;  // degenerate axis
    else if (at_lo)
      v = std::max(0.0, -g);
    else if (at_hi)
      v = std::max(0.0, g);
    else
      v = std::abs(g);
    worst = std::max(worst, v);
  }
  return worst;
}

LsqResult solve_box_problem(const BoxProblem& p) {
  LsqResult result;
  const int n = p.n();
  std::vector<double> alpha = min_norm_solution(p);
  for (int j = 0; j < n; ++j) alpha[j] = p.box[j].clamp(alpha[j]);

  double col_scale = 0.0;
  for (const Col& c : p.cols) col_scale = std::max(col_scale, std::sqrt(c.norm2()));

  constexpr int kMaxSweeps = 500;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    // single-coordinate pass
    Col r = p.residual(alpha);
    for (int j = 0; j < n; ++j) {
      const Col& c = p.cols[j];
      Col r_without{r.x - c.x * alpha[j], r.y - c.y * alpha[j]};
      const double next = coord_min(p, r_without, j);
      r.x = r_without.x + c.x * next;
      r.y = r_without.y + c.y * next;
      alpha[j] = next;
    }
    // pairwise pass, exact on each rectangle
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) pair_min(p, alpha, j, k);

    const double kkt = kkt_violation(p, alpha);
    const double res_norm = std::sqrt(objective(p, alpha));
    const double target = 1e-12 * std::max(1.0, col_scale * (1.0 + res_norm));
    if (kkt <= target) break;
  }

  result.iterations = sweep + 1;
  result.certified = sweep < kMaxSweeps;
  result.kkt_residual = kkt_violation(p, alpha);
  result.eps = std::sqrt(objective(p, alpha));
  result.argmin = std::move(alpha);
  result.attained = true;
  return result;
}

BoxProblem make_problem(const LinearSystem& sys, const std::vector<Interval>& box) {
  if (static_cast<int>(box.size()) != sys.n)
    throw std::invalid_argument("box dimension mismatch");
  BoxProblem p;
  p.cols.resize(sys.n);
  for (int j = 0; j < sys.n; ++j) p.cols[j] = {sys.at(0, j), sys.at(1, j)};
  p.target = sys.G;
  p.box = box;
  return p;
}

// ---------------------------------------------------------------------------
// Carved regions: multi-start projected descent, heuristic.

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_double(uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Clamp into the box and then pull constraint targets inside their bounds.
// Each constraint bounds its target by a function of other coordinates, so a
// few passes settle chained references.
void project_feasible(const Region& region, std::vector<double>& alpha) {
  for (int j = 0; j < region.dim(); ++j) alpha[j] = region.box[j].clamp(alpha[j]);
  for (int pass = 0; pass < 4; ++pass) {
    for (const auto& constraint : region.constraints) {
      const double bound = constraint.bound_at(alpha);
      if (constraint.dir == ScalarConstraint::Dir::Le) {
        if (bound != kInf && alpha[constraint.target] > bound)
          alpha[constraint.target] = region.box[constraint.target].clamp(bound);
      } else {
        if (bound != -kInf && alpha[constraint.target] < bound)
          alpha[constraint.target] = region.box[constraint.target].clamp(bound);
      }
    }
  }
}

LsqResult solve_carved(const BoxProblem& p, const Region& region) {
  constexpr int kStarts = 16;
  constexpr int kDescentSteps = 200;
  const int n = p.n();

  LsqResult box_result = solve_box_problem(p);
  // The box value is a lower bound for the carved region; when its minimizer
  // already satisfies the constraints it is the certified carved minimum.
  if (contains(region, box_result.argmin)) return box_result;

  // finite sampling window for the starts
  std::vector<Interval> window = region.box;
  for (auto& axis : window) {
    const double ref = (axis.lo_finite() ? std::abs(axis.lo) : 0.0) +
                       (axis.hi_finite() ? std::abs(axis.hi) : 0.0);
    const double radius = 10.0 * (1.0 + ref);
    if (!axis.lo_finite()) axis.lo = std::min(-radius, axis.hi_finite() ? axis.hi : 0.0);
    if (!axis.hi_finite()) axis.hi = std::max(radius, axis.lo_finite() ? axis.lo : 0.0);
  }

  uint64_t rng = 0x5eed5eed5eed5eedull;
  std::vector<double> best;
  double best_obj = kInf;
  int iterations = 0;

  std::vector<double> alpha(n);
  std::vector<double> grad(n);
  std::vector<double> trial(n);
  for (int start = 0; start < kStarts; ++start) {
    if (start == 0) {
      alpha = box_result.argmin;
    } else {
      for (int j = 0; j < n; ++j)
        alpha[j] = window[j].lo + (window[j].hi - window[j].lo) * unit_double(rng);
    }
    project_feasible(region, alpha);

    double step = 1.0;
    double current = objective(p, alpha);
    for (int it = 0; it < kDescentSteps; ++it) {
      ++iterations;
      const Col r = p.residual(alpha);
      double grad_norm = 0.0;
      for (int j = 0; j < n; ++j) {
        grad[j] = dot(p.cols[j], r);
        grad_norm = std::max(grad_norm, std::abs(grad[j]));
      }
      if (grad_norm < 1e-15 * (1.0 + current)) break;
      bool improved = false;
      for (int back = 0; back < 24; ++back) {
        for (int j = 0; j < n; ++j) trial[j] = alpha[j] - step * grad[j];
        project_feasible(region, trial);
        const double value = objective(p, trial);
        if (value < current * (1.0 - 1e-14) - 1e-300) {
          std::swap(alpha, trial);
          current = value;
          improved = true;
          step *= 1.4;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (current < best_obj) {
      best_obj = current;
      best = alpha;
    }
  }

  LsqResult result;
  result.eps = std::sqrt(best_obj);
  result.argmin = std::move(best);
  result.attained = true;
  result.certified = false;
  result.iterations = iterations;
  return result;
}

}  // namespace

LsqResult solve_box_lsq(const LinearSystem& sys, const std::vector<Interval>& box) {
  return solve_box_problem(make_problem(sys, box));
}

LsqResult eps_omega(const ProblemSpec& spec, const Region& region, Complex w) {
  const LinearSystem sys = linearize(spec, w);
  const BoxProblem p = make_problem(sys, region.box);
  if (!region.carved()) return solve_box_problem(p);
  return solve_carved(p, region);
}

double resolvent_bound(const ProblemSpec& spec, const Region& region, Complex w) {
  const double eps = eps_omega(spec, region, w).eps;
  return eps > 0.0 ? 1.0 / eps : kInf;
}

bool pseudo_membership(const ProblemSpec& spec, const Region& region, Complex w,
                       double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("pseudo level must be positive");
  return eps_omega(spec, region, w).eps < eps;
}

LsqResult eps_on_skeleton(const ProblemSpec& spec, const Region& region, int m,
                          Complex w) {
  const LinearSystem sys = linearize(spec, w);
  if (static_cast<int>(region.box.size()) != sys.n)
    throw std::invalid_argument("region dimension mismatch");
  const std::vector<Face> faces = skeleton_faces(region, m);

  LsqResult best;
  best.eps = kInf;
  for (const Face& face : faces) {
    // reduce: fixed coordinates move into the right-hand side
    BoxProblem sub;
    sub.target = sys.G;
    for (const auto& [axis, value] : face.fixed) {
      sub.target[0] -= sys.at(0, axis) * value;
      sub.target[1] -= sys.at(1, axis) * value;
    }
    for (const auto& [axis, interval] : face.free) {
      sub.cols.push_back({sys.at(0, axis), sys.at(1, axis)});
      sub.box.push_back(interval);
    }
    LsqResult reduced = solve_box_problem(sub);
    if (reduced.eps < best.eps) {
      std::vector<double> alpha(sys.n, 0.0);
      for (const auto& [axis, value] : face.fixed) alpha[axis] = value;
      std::size_t idx = 0;
      for (const auto& [axis, interval] : face.free) alpha[axis] = reduced.argmin[idx++];
      best = std::move(reduced);
      best.argmin = std::move(alpha);
    }
  }
  if (!std::isfinite(best.eps) && faces.empty())
    throw std::logic_error("skeleton has no faces");
  return best;
}

}  // namespace specrange
