#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "specrange/interval.hpp"

namespace specrange {

/// Piecewise-linear representation of an upper (concave) or lower (convex)
/// convex-hull envelope of a sampled function on an interval.
struct EnvelopeFn {
  enum class Kind { Upper, Lower };

  Kind kind = Kind::Upper;
  Interval domain;
  // Hull vertices sorted by x. Empty iff infinite.
  std::vector<std::pair<double, double>> breakpoints;
  // Constant +inf (upper) / -inf (lower) envelope, the unbounded-operator case.
  bool infinite = false;

  /// Linear interpolation between breakpoints; beyond the sampled range the
  /// end segments extend linearly. Returns +/-inf for infinite envelopes.
  double value_at(double x) const;

  double min_breakpoint_value() const;
};

/// Upper concave envelope (upper convex-hull chain) of the samples.
/// With unbounded set, returns the +inf envelope instead.
EnvelopeFn upper_envelope(std::span<const std::pair<double, double>> samples,
                          Interval domain, bool unbounded = false);

/// Lower convex envelope (lower hull chain) of the samples.
EnvelopeFn lower_envelope(std::span<const std::pair<double, double>> samples,
                          Interval domain);

struct AffineBound {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double alpha) const { return slope * alpha + intercept; }
};

/// Secant of y over [a0, a1]:
///   slope = (y(a1) - y(a0)) / (a1 - a0),
///   intercept = (y(a0) a1 - y(a1) a0) / (a1 - a0).
/// For convex y this line dominates y on [a0, a1].
AffineBound chord_bound(double a0, double a1, const std::function<double(double)>& y);

/// Pointwise minimum of a parameterized affine family over an explicit
/// parameter grid.
double affine_family_min(const std::function<AffineBound(double)>& family,
                         std::span<const double> s_grid, double alpha);

/// Uniform samples (x, y(x)) over [a, b], endpoints included.
std::vector<std::pair<double, double>> sample_function(
    const std::function<double(double)>& y, double a, double b, int count = 1024);

}  // namespace specrange
