#include "specrange/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specrange {

namespace {

void check_dim(const Region& region, std::span<const double> alpha) {
  if (static_cast<int>(alpha.size()) != region.dim())
    throw std::invalid_argument("alpha dimension mismatch");
}

void require_box(const Region& region, const char* op) {
  if (region.carved())
    throw std::invalid_argument(std::string(op) + " unavailable for constraint-carved region");
}

// Sub-box after the slashed-boundary split, chosen to contain alpha: every
// doubly-unbounded axis is replaced by [0, inf) or (-inf, 0].
std::vector<Interval> split_box_for(const std::vector<Interval>& box,
                                    std::span<const double> alpha) {
  std::vector<Interval> out = box;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!out[j].doubly_unbounded()) continue;
    if (alpha[j] >= 0.0)
      out[j] = Interval{0.0, kInf};
    else
      out[j] = Interval{-kInf, 0.0};
  }
  return out;
}

int endpoint_count(const std::vector<Interval>& box, std::span<const double> alpha,
                   double tol) {
  int count = 0;
  for (std::size_t j = 0; j < box.size(); ++j)
    if (box[j].at_endpoint(alpha[j], tol)) ++count;
  return count;
}

}  // namespace

double ScalarConstraint::bound_at(std::span<const double> alpha) const {
  if (combine == Combine::Sum) {
    double value = offset;
    for (const auto& term : terms) {
      const double v = term.env.value_at(alpha[term.axis]);
      if (std::isinf(v)) return v;
      value += v;
    }
    return value;
  }
  // NormBound: (gamma^{2/3} + sum env^{2/3})^{3/2}
  double acc = std::pow(gamma, 2.0 / 3.0);
  for (const auto& term : terms) {
    const double v = term.env.value_at(alpha[term.axis]);
    if (v == kInf) return negate_bound ? -kInf : kInf;
    if (v < 0.0) throw std::domain_error("negative envelope value in norm-bound constraint");
    acc += std::pow(v, 2.0 / 3.0);
  }
  const double bound = std::pow(acc, 1.5);
  return negate_bound ? -bound : bound;
}

bool ScalarConstraint::satisfied(std::span<const double> alpha, double tol) const {
  const double bound = bound_at(alpha);
  const double slack = tol * (1.0 + std::abs(bound));
  if (dir == Dir::Le) {
    if (bound == kInf) return true;
    return alpha[target] <= bound + slack;
  }
  if (bound == -kInf) return true;
  return alpha[target] >= bound - slack;
}

bool contains(const Region& region, std::span<const double> alpha, double tol) {
  check_dim(region, alpha);
  for (int j = 0; j < region.dim(); ++j)
    if (!region.box[j].contains(alpha[j], tol)) return false;
  for (const auto& constraint : region.constraints)
    if (!constraint.satisfied(alpha, tol)) return false;
  return true;
}

bool slashed_boundary_contains(const Region& region, std::span<const double> alpha,
                               double tol) {
  require_box(region, "slashed boundary");
  return skeleton_contains(region, 0, alpha, tol);
}

bool skeleton_contains(const Region& region, int m, std::span<const double> alpha,
                       double tol) {
  require_box(region, "skeleton");
  check_dim(region, alpha);
  if (m < -1 || m >= region.dim())
    throw std::invalid_argument("skeleton order out of range");
  if (!contains(region, alpha, tol)) return false;
  if (m == -1) return true;
  const std::vector<Interval> sub = split_box_for(region.box, alpha);
  return endpoint_count(sub, alpha, tol) >= m + 1;
}

std::vector<Face> skeleton_faces(const Region& region, int m) {
  require_box(region, "skeleton");
  const int n = region.dim();
  if (m < -1 || m >= n) throw std::invalid_argument("skeleton order out of range");

  std::vector<Face> faces;
  auto add_unique = [&faces](Face face) {
    std::sort(face.fixed.begin(), face.fixed.end());
    std::sort(face.free.begin(), face.free.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& existing : faces)
      if (existing == face) return;
    faces.push_back(std::move(face));
  };

  // enumerate the split sub-boxes (one branch per doubly-unbounded axis)
  std::vector<int> split_axes;
  for (int j = 0; j < n; ++j)
    if (region.box[j].doubly_unbounded()) split_axes.push_back(j);

  const std::size_t branch_count = std::size_t{1} << split_axes.size();
  for (std::size_t branch = 0; branch < branch_count; ++branch) {
    std::vector<Interval> sub = region.box;
    for (std::size_t s = 0; s < split_axes.size(); ++s)
      sub[split_axes[s]] =
          (branch >> s) & 1 ? Interval{-kInf, 0.0} : Interval{0.0, kInf};

    if (m == -1) {
      Face face;
      for (int j = 0; j < n; ++j) face.free.emplace_back(j, sub[j]);
      add_unique(std::move(face));
      continue;
    }

    // choose m+1 axes to fix, then an endpoint of each
    std::vector<int> chosen;
    auto emit = [&]() {
      std::vector<std::vector<double>> endpoint_options;
      for (int axis : chosen) {
        std::vector<double> opts;
        if (sub[axis].lo_finite()) opts.push_back(sub[axis].lo);
        if (sub[axis].hi_finite() && !sub[axis].degenerate()) opts.push_back(sub[axis].hi);
        if (opts.empty()) return;  // axis has no finite endpoint in this sub-box
        endpoint_options.push_back(std::move(opts));
      }
      std::vector<std::size_t> pick(chosen.size(), 0);
      for (;;) {
        Face face;
        std::size_t ci = 0;
        for (int j = 0; j < n; ++j) {
          auto it = std::find(chosen.begin(), chosen.end(), j);
          if (it != chosen.end()) {
            face.fixed.emplace_back(j, endpoint_options[ci][pick[ci]]);
            ++ci;
          } else {
            face.free.emplace_back(j, sub[j]);
          }
        }
        add_unique(std::move(face));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == endpoint_options[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    };
    auto recurse = [&](auto&& self, int start) -> void {
      if (static_cast<int>(chosen.size()) == m + 1) {
        emit();
        return;
      }
      for (int j = start; j < n; ++j) {
        chosen.push_back(j);
        self(self, j + 1);
        chosen.pop_back();
      }
    };
    recurse(recurse, 0);
  }
  return faces;
}

Region inflate_l1(const Region& region, double eps) {
  if (eps < 0.0) throw std::invalid_argument("negative inflation radius");
  require_box(region, "l1 inflation");
  Region out = region;
  for (auto& axis : out.box) {
    if (axis.lo_finite()) axis.lo -= eps;
    if (axis.hi_finite()) axis.hi += eps;
  }
  return out;
}

std::pair<double, double> clip_line_to_box(const std::vector<Interval>& box,
                                           std::span<const double> point,
                                           std::span<const double> direction,
                                           double tol) {
  double t_lo = -kInf;
  double t_hi = kInf;
  for (std::size_t j = 0; j < box.size(); ++j) {
    const double d = direction[j];
    const double p = point[j];
    const Interval& axis = box[j];
    const double slack_lo =
        axis.lo_finite() ? axis.lo - tol * (1.0 + std::abs(axis.lo)) : -kInf;
    const double slack_hi =
        axis.hi_finite() ? axis.hi + tol * (1.0 + std::abs(axis.hi)) : kInf;
    if (d == 0.0) {
      if (p < slack_lo || p > slack_hi) return {1.0, 0.0};
      continue;
    }
    double enter = (slack_lo - p) / d;
    double exit = (slack_hi - p) / d;
    if (d < 0.0) std::swap(enter, exit);
    if (std::isnan(enter)) enter = -kInf;  // 0 * inf from unbounded endpoints
    if (std::isnan(exit)) exit = kInf;
    t_lo = std::max(t_lo, enter);
    t_hi = std::min(t_hi, exit);
    if (t_lo > t_hi) return {1.0, 0.0};
  }
  return {t_lo, t_hi};
}

namespace {

// Worst constraint violation at a point; <= 0 means all constraints hold.
double constraint_margin(const Region& region, std::span<const double> alpha) {
  double margin = -kInf;
  for (const auto& constraint : region.constraints) {
    const double bound = constraint.bound_at(alpha);
    double violation;
    if (constraint.dir == ScalarConstraint::Dir::Le)
      violation = bound == kInf ? -kInf : alpha[constraint.target] - bound;
    else
      violation = bound == -kInf ? -kInf : bound - alpha[constraint.target];
    margin = std::max(margin, violation);
  }
  return margin;
}

}  // namespace

std::optional<std::vector<double>> line_region_point(const Region& region,
                                                     std::span<const double> point,
                                                     std::span<const double> direction,
                                                     double tol, int resolution) {
  check_dim(region, point);
  check_dim(region, direction);
  double dir_norm = 0.0;
  for (double d : direction) dir_norm += d * d;
  if (dir_norm == 0.0) throw std::invalid_argument("zero line direction");

  const int n = region.dim();
  auto point_at = [&](double t) {
    std::vector<double> alpha(n);
    for (int j = 0; j < n; ++j) alpha[j] = point[j] + t * direction[j];
    for (int j = 0; j < n; ++j) alpha[j] = region.box[j].clamp(alpha[j]);
    return alpha;
  };

  auto [t_lo, t_hi] = clip_line_to_box(region.box, point, direction, tol);
  if (t_lo > t_hi) return std::nullopt;

  if (region.constraints.empty()) {
    // prefer a witness on the slashed boundary: a box wall if the clip range
    // has a finite end, otherwise the zero crossing of a split axis
    if (std::isfinite(t_lo)) return point_at(t_lo);
    if (std::isfinite(t_hi)) return point_at(t_hi);
    for (int j = 0; j < n; ++j)
      if (region.box[j].doubly_unbounded() && direction[j] != 0.0)
        return point_at(-point[j] / direction[j]);
    return point_at(0.0);
  }

  std::vector<double> alpha(n);
  auto at = [&](double t) -> std::span<const double> {
    for (int j = 0; j < n; ++j) alpha[j] = point[j] + t * direction[j];
    return alpha;
  };
  auto margin = [&](double t) { return constraint_margin(region, at(t)); };

  // map an unbounded parameter range through u/(1-|u|) so sampling covers it
  const bool lo_inf = !std::isfinite(t_lo);
  const bool hi_inf = !std::isfinite(t_hi);
  const double center = lo_inf && hi_inf ? 0.0 : (lo_inf ? t_hi : (hi_inf ? t_lo : 0.0));
  const double scale = 1.0 + std::abs(center);
  auto param = [&](int k) -> double {
    const double u = static_cast<double>(k) / resolution;  // in [0, 1]
    if (!lo_inf && !hi_inf) return t_lo + (t_hi - t_lo) * u;
    if (lo_inf && hi_inf) {
      const double v = 2.0 * u - 1.0;  // (-1, 1)
      if (std::abs(v) >= 1.0) return v > 0 ? kInf : -kInf;
      return center + scale * v / (1.0 - std::abs(v));
    }
    if (hi_inf) {
      if (u >= 1.0) return kInf;
      return center + scale * u / (1.0 - u);
    }
    if (u >= 1.0) return -kInf;
    return center - scale * u / (1.0 - u);
  };

  // Sample, then refine around the best sample. The margin is convex along
  // the line when upper envelopes back <= constraints and lower envelopes
  // back >= constraints, so this locates the true minimum; otherwise a miss
  // at this resolution reports outside.
  int best_k = -1;
  double best_margin = kInf;
  for (int k = 0; k <= resolution; ++k) {
    const double t = param(k);
    if (!std::isfinite(t)) continue;
    const double m = margin(t);
    if (m <= tol) return point_at(t);
    if (m < best_margin) {
      best_margin = m;
      best_k = k;
    }
  }
  if (best_k < 0) return std::nullopt;
  double a = param(std::max(best_k - 1, 0));
  double b = param(std::min(best_k + 1, resolution));
  if (!std::isfinite(a)) a = param(best_k);
  if (!std::isfinite(b)) b = param(best_k);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (margin(m1) <= tol) return point_at(m1);
    if (margin(m2) <= tol) return point_at(m2);
    if (margin(m1) < margin(m2))
      b = m2;
    else
      a = m1;
  }
  return std::nullopt;
}

bool line_meets_region(const Region& region, std::span<const double> point,
                       std::span<const double> direction, double tol, int resolution) {
  return line_region_point(region, point, direction, tol, resolution).has_value();
}

}  // namespace specrange
