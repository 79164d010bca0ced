#include "specrange/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specrange {

double EnvelopeFn::value_at(double x) const {
  if (infinite) return kind == Kind::Upper ? kInf : -kInf;
  if (breakpoints.empty()) throw std::logic_error("empty envelope");
  if (breakpoints.size() == 1) return breakpoints.front().second;
  // Outside the sampled range the end segments are extended linearly: exact
  // for affine data and on the hull side of it otherwise.
  std::size_t hi = 1;
  if (x > breakpoints[1].first) {
    if (x >= breakpoints.back().first) {
      hi = breakpoints.size() - 1;
    } else {
      hi = static_cast<std::size_t>(
          std::upper_bound(breakpoints.begin(), breakpoints.end(), x,
                           [](double value, const std::pair<double, double>& bp) {
                             return value < bp.first;
                           }) -
          breakpoints.begin());
    }
  }
  const auto& [x1, y1] = breakpoints[hi];
  const auto& [x0, y0] = breakpoints[hi - 1];
  const double t = (x - x0) / (x1 - x0);
  return y0 + t * (y1 - y0);
}

double EnvelopeFn::min_breakpoint_value() const {
  if (infinite) return kind == Kind::Upper ? kInf : -kInf;
  double m = kInf;
  for (const auto& [x, y] : breakpoints) m = std::min(m, y);
  return m;
}

namespace {

double cross(const std::pair<double, double>& o, const std::pair<double, double>& a,
             const std::pair<double, double>& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

void check_samples(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("need at least 2 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].first < samples[i - 1].first)
      throw std::invalid_argument("samples must be sorted by x");
}

// Monotone chain over x-sorted samples. keep_sign = -1 builds the upper
// (concave) chain, +1 the lower (convex) chain; collinear points are dropped.
std::vector<std::pair<double, double>> hull_chain(
    std::span<const std::pair<double, double>> samples, double keep_sign) {
  // collapse duplicate x, keeping the extreme sample for this chain
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (const auto& p : samples) {
    if (!pts.empty() && pts.back().first == p.first) {
      if (keep_sign * (p.second - pts.back().second) < 0.0) pts.back() = p;
      continue;
    }
    pts.push_back(p);
  }
  std::vector<std::pair<double, double>> chain;
  for (const auto& p : pts) {
    while (chain.size() >= 2 &&
           keep_sign * cross(chain[chain.size() - 2], chain.back(), p) <= 0.0)
      chain.pop_back();
    chain.push_back(p);
  }
  return chain;
}

}  // namespace

EnvelopeFn upper_envelope(std::span<const std::pair<double, double>> samples,
                          Interval domain, bool unbounded) {
  EnvelopeFn env;
  env.kind = EnvelopeFn::Kind::Upper;
  env.domain = domain;
  if (unbounded) {
    env.infinite = true;
    return env;
  }
  check_samples(samples);
  env.breakpoints = hull_chain(samples, -1.0);
  return env;
}

EnvelopeFn lower_envelope(std::span<const std::pair<double, double>> samples,
                          Interval domain) {
  EnvelopeFn env;
  env.kind = EnvelopeFn::Kind::Lower;
  env.domain = domain;
  check_samples(samples);
  env.breakpoints = hull_chain(samples, 1.0);
  return env;
}

AffineBound chord_bound(double a0, double a1, const std::function<double(double)>& y) {
  if (!(a0 < a1)) throw std::invalid_argument("chord_bound requires a0 < a1");
  const double y0 = y(a0);
  const double y1 = y(a1);
  return {(y1 - y0) / (a1 - a0), (y0 * a1 - y1 * a0) / (a1 - a0)};
}

double affine_family_min(const std::function<AffineBound(double)>& family,
                         std::span<const double> s_grid, double alpha) {
  if (s_grid.empty()) throw std::invalid_argument("empty parameter grid");
  double best = kInf;
  for (double s : s_grid) best = std::min(best, family(s)(alpha));
  return best;
}

std::vector<std::pair<double, double>> sample_function(
    const std::function<double(double)>& y, double a, double b, int count) {
  if (count < 2) throw std::invalid_argument("need at least 2 sample points");
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double x = a + (b - a) * i / (count - 1);
    out.emplace_back(x, y(x));
  }
  return out;
}

}  // namespace specrange
