#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace specrange {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default tolerance for "at an endpoint" decisions, scaled by 1 + |endpoint|.
inline constexpr double kEndpointTol = 1e-9;

inline bool near_value(double x, double e, double tol) {
  return std::abs(x - e) <= tol * (1.0 + std::abs(e));
}

/// Closed interval with possibly infinite endpoints.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool lo_finite() const { return std::isfinite(lo); }
  bool hi_finite() const { return std::isfinite(hi); }
  bool bounded() const { return lo_finite() && hi_finite(); }
  bool degenerate() const { return lo == hi; }
  bool doubly_unbounded() const { return !lo_finite() && !hi_finite(); }

  bool contains(double x, double tol = kEndpointTol) const {
    const double lo_slack = lo_finite() ? lo - tol * (1.0 + std::abs(lo)) : -kInf;
    const double hi_slack = hi_finite() ? hi + tol * (1.0 + std::abs(hi)) : kInf;
    return x >= lo_slack && x <= hi_slack;
  }

  bool at_endpoint(double x, double tol = kEndpointTol) const {
    return (lo_finite() && near_value(x, lo, tol)) ||
           (hi_finite() && near_value(x, hi, tol));
  }

  double clamp(double x) const { return std::min(std::max(x, lo), hi); }

  bool operator==(const Interval&) const = default;
};

}  // namespace specrange
