#include "specrange/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace specrange {

namespace {

double max_abs(const std::vector<Complex>& entries) {
  double m = 0.0;
  for (const Complex& z : entries) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

HermMatrix::HermMatrix(int dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ <= 0 || entries_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw std::invalid_argument("matrix entry count does not match dimension");
  const double scale = max_abs(entries_) + 1.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > 1e-12 * scale)
        throw std::invalid_argument("matrix is not Hermitian");
}

HermMatrix HermMatrix::diagonal(std::span<const double> values) {
  const int d = static_cast<int>(values.size());
  std::vector<Complex> entries(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i) entries[static_cast<std::size_t>(i) * d + i] = values[i];
  return HermMatrix(d, std::move(entries));
}

HermMatrix HermMatrix::zero(int dim) {
  return HermMatrix(dim,
                    std::vector<Complex>(static_cast<std::size_t>(dim) * dim, Complex(0.0)));
}

std::vector<Complex> HermMatrix::apply(std::span<const Complex> u) const {
  std::vector<Complex> out(dim_, Complex(0.0, 0.0));
  for (int i = 0; i < dim_; ++i) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < dim_; ++j) acc += at(i, j) * u[j];
    out[i] = acc;
  }
  return out;
}

double HermMatrix::quadratic_form(std::span<const Complex> u) const {
  const std::vector<Complex> au = apply(u);
  Complex acc(0.0, 0.0);
  for (int i = 0; i < dim_; ++i) acc += au[i] * std::conj(u[i]);
  return acc.real();
}

// ---------------------------------------------------------------------------
// Cyclic complex Jacobi.

Eigensystem jacobi_eigen(const HermMatrix& mat) {
  const int d = mat.dim();
  std::vector<Complex> a = mat.entries();
  std::vector<Complex> v(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i) * d + i] = 1.0;

  auto A = [&](int i, int j) -> Complex& { return a[static_cast<std::size_t>(i) * d + j]; };
  auto V = [&](int i, int j) -> Complex& { return v[static_cast<std::size_t>(i) * d + j]; };

  double norm = 0.0;
  for (const Complex& z : a) norm += std::norm(z);
  norm = std::sqrt(norm);
  const double target = 1e-12 * (norm + 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off += 2.0 * std::norm(A(p, q));
    if (std::sqrt(off) <= target) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const Complex apq = A(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // unitary 2x2: [[c, -e^{ib} s], [e^{-ib} s, c]] with b = arg(a_pq)
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const Complex phase = apq / mag;  // e^{ib}

        // columns: A <- A U
        for (int i = 0; i < d; ++i) {
          const Complex aip = A(i, p);
          const Complex aiq = A(i, q);
          A(i, p) = c * aip + std::conj(phase) * s * aiq;
          A(i, q) = -phase * s * aip + c * aiq;
        }
        // rows: A <- U* A
        for (int i = 0; i < d; ++i) {
          const Complex api = A(p, i);
          const Complex aqi = A(q, i);
          A(p, i) = c * api + phase * s * aqi;
          A(q, i) = -std::conj(phase) * s * api + c * aqi;
        }
        // accumulate eigenvectors: V <- V U
        for (int i = 0; i < d; ++i) {
          const Complex vip = V(i, p);
          const Complex viq = V(i, q);
          V(i, p) = c * vip + std::conj(phase) * s * viq;
          V(i, q) = -phase * s * vip + c * viq;
        }
      }
    }
  }

  Eigensystem sys;
  sys.dim = d;
  sys.values.resize(d);
  for (int i = 0; i < d; ++i) sys.values[i] = A(i, i).real();

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return sys.values[x] < sys.values[y]; });
  std::vector<double> sorted_values(d);
  sys.vectors.assign(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int col = 0; col < d; ++col) {
    sorted_values[col] = sys.values[order[col]];
    for (int row = 0; row < d; ++row)
      sys.vectors[static_cast<std::size_t>(row) * d + col] = V(row, order[col]);
  }
  sys.values = std::move(sorted_values);
  return sys;
}

Interval numerical_range_interval(const HermMatrix& mat) {
  const Eigensystem sys = jacobi_eigen(mat);
  return Interval{sys.values.front(), sys.values.back()};
}

HermMatrix apply_borel(const HermMatrix& mat, const std::function<double(double)>& y) {
  const Eigensystem sys = jacobi_eigen(mat);
  const int d = mat.dim();
  std::vector<double> mapped(d);
  for (int i = 0; i < d; ++i) {
    mapped[i] = y(sys.values[i]);
    if (!std::isfinite(mapped[i]))
      throw std::domain_error("function undefined at an eigenvalue");
  }
  std::vector<Complex> out(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < d; ++k)
        acc += sys.vector_at(i, k) * mapped[k] * std::conj(sys.vector_at(j, k));
      out[static_cast<std::size_t>(i) * d + j] = acc;
    }
  // symmetrize away the rounding skew before the hermiticity check
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const Complex sym = 0.5 * (out[static_cast<std::size_t>(i) * d + j] +
                                 std::conj(out[static_cast<std::size_t>(j) * d + i]));
      out[static_cast<std::size_t>(i) * d + j] = sym;
      out[static_cast<std::size_t>(j) * d + i] = std::conj(sym);
    }
  return HermMatrix(d, std::move(out));
}

// ---------------------------------------------------------------------------
// Sampling.

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

UnitVectorSampler::UnitVectorSampler(int dim, std::uint64_t seed) : dim_(dim) {
  state_[0] = seed;
  state_[1] = 0;
  // warm up
  for (int i = 0; i < 4; ++i) (void)splitmix64(state_[0]);
}

std::vector<Complex> UnitVectorSampler::next() {
  auto uniform = [this]() {
    return (static_cast<double>(splitmix64(state_[0]) >> 11) + 0.5) * 0x1.0p-53;
  };
  // Box-Muller, standard complex normal entries
  std::vector<Complex> u(dim_);
  for (int i = 0; i < dim_; ++i) {
    const double r1 = std::sqrt(-2.0 * std::log(uniform()));
    const double t1 = 2.0 * M_PI * uniform();
    u[i] = Complex(r1 * std::cos(t1), r1 * std::sin(t1));
  }
  double norm = 0.0;
  for (const Complex& z : u) norm += std::norm(z);
  norm = std::sqrt(norm);
  if (norm < 1e-30) return next();
  for (Complex& z : u) z /= norm;
  return u;
}

namespace {

void check_mats(std::span<const HermMatrix> mats) {
  if (mats.empty()) throw std::invalid_argument("no coefficient matrices");
  for (const HermMatrix& m : mats)
    if (m.dim() != mats.front().dim())
      throw std::invalid_argument("coefficient matrix dimension mismatch");
}

std::vector<std::vector<Complex>> sampled_vectors(int dim, int count, std::uint64_t seed) {
  std::vector<std::vector<Complex>> out;
  out.reserve(static_cast<std::size_t>(count) + dim);
  for (int i = 0; i < dim; ++i) {
    std::vector<Complex> e(dim, Complex(0.0, 0.0));
    e[i] = 1.0;
    out.push_back(std::move(e));
  }
  UnitVectorSampler sampler(dim, seed);
  for (int i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace

std::vector<std::vector<double>> sample_joint_range(std::span<const HermMatrix> mats,
                                                    int count, std::uint64_t seed) {
  check_mats(mats);
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  const int d = mats.front().dim();
  std::vector<std::vector<double>> points;
  for (const auto& u : sampled_vectors(d, count, seed)) {
    std::vector<double> point(mats.size());
    for (std::size_t j = 0; j < mats.size(); ++j) point[j] = mats[j].quadratic_form(u);
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<Complex> sample_wt(std::span<const HermMatrix> mats, const ProblemSpec& spec,
                               int count, std::uint64_t seed) {
  check_mats(mats);
  if (static_cast<int>(mats.size()) != spec.n())
    throw std::invalid_argument("matrix count does not match problem");
  const auto g_poly = spec.g.polynomial();
  if (!g_poly) throw std::invalid_argument("g is not polynomial in w");
  std::vector<std::vector<Complex>> f_polys;
  for (const CoeffExpr& f : spec.f) {
    auto p = f.polynomial();
    if (!p) throw std::invalid_argument("coefficient function is not polynomial in w");
    f_polys.push_back(std::move(*p));
  }

  const int d = mats.front().dim();
  std::vector<Complex> roots;
  for (const auto& u : sampled_vectors(d, count, seed)) {
    std::vector<Complex> poly = *g_poly;
    for (std::size_t j = 0; j < mats.size(); ++j) {
      const double alpha = mats[j].quadratic_form(u);
      if (f_polys[j].size() > poly.size()) poly.resize(f_polys[j].size(), Complex(0.0));
      for (std::size_t k = 0; k < f_polys[j].size(); ++k) poly[k] += alpha * f_polys[j][k];
    }
    for (Complex root : polynomial_roots(poly)) roots.push_back(root);
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich simultaneous iteration.

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  double cmax = 0.0;
  for (const Complex& z : c) cmax = std::max(cmax, std::abs(z));
  if (cmax == 0.0) return {};  // zero polynomial: skipped by callers
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  if (c.size() <= 1) return {};

  std::vector<Complex> roots;
  while (c.size() > 1 && std::abs(c.front()) <= 1e-14 * cmax) {
    roots.push_back(Complex(0.0, 0.0));
    c.erase(c.begin());
  }
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  if (deg == 2) {
    const Complex a = c[2], b = c[1], c0 = c[0];
    const Complex disc = std::sqrt(b * b - 4.0 * a * c0);
    // the numerically stable branch
    const Complex q = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0.0 ? disc : -disc));
    roots.push_back(q / a);
    roots.push_back(q == Complex(0.0) ? Complex(0.0) : c0 / q);
    return roots;
  }

  std::vector<Complex> dc(deg);
  for (int k = 1; k <= deg; ++k) dc[k - 1] = static_cast<double>(k) * c[k];

  auto horner = [](const std::vector<Complex>& p, Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
    return acc;
  };

  // Cauchy-style radius for the initial circle
  double radius = 0.0;
  for (int k = 0; k < deg; ++k) radius = std::max(radius, std::abs(c[k] / c[deg]));
  radius = 1.0 + radius;

  std::vector<Complex> z(deg);
  for (int k = 0; k < deg; ++k) {
    const double angle = 2.0 * M_PI * (k + 0.25) / deg + 0.5;
    z[k] = radius * Complex(std::cos(angle), std::sin(angle));
  }

  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (int k = 0; k < deg; ++k) {
      const Complex pv = horner(c, z[k]);
      if (std::abs(pv) == 0.0) continue;
      Complex dv = horner(dc, z[k]);
      if (std::abs(dv) == 0.0) dv = Complex(1e-300, 0.0);
      const Complex newton = pv / dv;
      Complex repulse(0.0, 0.0);
      for (int j = 0; j < deg; ++j) {
        if (j == k) continue;
        Complex diff = z[k] - z[j];
        if (std::abs(diff) < 1e-300) diff = Complex(1e-300, 0.0);
        repulse += 1.0 / diff;
      }
      const Complex denom = 1.0 - newton * repulse;
      const Complex step = std::abs(denom) < 1e-300 ? newton : newton / denom;
      z[k] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved <= 1e-15 * radius) break;
  }
  // one Newton polish per root
  for (int k = 0; k < deg; ++k) {
    const Complex pv = horner(c, z[k]);
    const Complex dv = horner(dc, z[k]);
    if (std::abs(dv) > 0.0) z[k] -= pv / dv;
  }

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Resolvent norm via LU and inverse power iteration.

namespace {

struct Lu {
  int dim = 0;
  std::vector<Complex> lu;  // row-major
  std::vector<int> perm;
  bool singular = false;
};

Lu lu_factor(int d, std::vector<Complex> a) {
  Lu f;
  f.dim = d;
  f.perm.resize(d);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  double scale = 0.0;
  for (const Complex& z : a) scale = std::max(scale, std::abs(z));
  auto at = [&](int i, int j) -> Complex& { return a[static_cast<std::size_t>(i) * d + j]; };
  for (int k = 0; k < d; ++k) {
    int pivot = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < d; ++i)
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        pivot = i;
      }
    if (best <= 1e-14 * (scale + 1e-300)) {
      f.singular = true;
      f.lu = std::move(a);
      return f;
    }
    if (pivot != k) {
      for (int j = 0; j < d; ++j) std::swap(at(k, j), at(pivot, j));
      std::swap(f.perm[k], f.perm[pivot]);
    }
    for (int i = k + 1; i < d; ++i) {
      at(i, k) /= at(k, k);
      for (int j = k + 1; j < d; ++j) at(i, j) -= at(i, k) * at(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

std::vector<Complex> lu_solve(const Lu& f, std::span<const Complex> rhs) {
  const int d = f.dim;
  std::vector<Complex> x(d);
  for (int i = 0; i < d; ++i) x[i] = rhs[f.perm[i]];
  auto at = [&](int i, int j) { return f.lu[static_cast<std::size_t>(i) * d + j]; };
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
  for (int i = d - 1; i >= 0; --i) {
    for (int j = i + 1; j < d; ++j) x[i] -= at(i, j) * x[j];
    x[i] /= at(i, i);
  }
  return x;
}

std::vector<Complex> conjugate_transpose(int d, const std::vector<Complex>& a) {
  std::vector<Complex> out(a.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out[static_cast<std::size_t>(i) * d + j] =
          std::conj(a[static_cast<std::size_t>(j) * d + i]);
  return out;
}

}  // namespace

double resolvent_norm(std::span<const HermMatrix> mats, const ProblemSpec& spec,
                      Complex w) {
  check_mats(mats);
  if (static_cast<int>(mats.size()) != spec.n())
    throw std::invalid_argument("matrix count does not match problem");
  const int d = mats.front().dim();
  const Complex g = spec.g.eval(w);
  std::vector<Complex> t(static_cast<std::size_t>(d) * d, Complex(0.0, 0.0));
  for (int i = 0; i < d; ++i) t[static_cast<std::size_t>(i) * d + i] = g;
  for (std::size_t j = 0; j < mats.size(); ++j) {
    const Complex fj = spec.f[j].eval(w);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        t[static_cast<std::size_t>(i) * d + k] += fj * mats[j].at(i, k);
  }

  const Lu lu_t = lu_factor(d, t);
  if (lu_t.singular) return kInf;
  const Lu lu_th = lu_factor(d, conjugate_transpose(d, t));
  if (lu_th.singular) return kInf;

  // power iteration on (T* T)^{-1}: dominant eigenvalue is 1/sigma_min^2
  UnitVectorSampler sampler(d, 0x7e50137ull);
  std::vector<Complex> v = sampler.next();
  double lambda = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    std::vector<Complex> x = lu_solve(lu_th, v);  // x = (T*)^{-1} v
    std::vector<Complex> y = lu_solve(lu_t, x);   // y = T^{-1} x
    Complex rq(0.0, 0.0);
    double norm = 0.0;
    for (int i = 0; i < d; ++i) {
      rq += y[i] * std::conj(v[i]);
      norm += std::norm(y[i]);
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    const double next = rq.real();
    for (int i = 0; i < d; ++i) v[i] = y[i] / norm;
    if (iter > 2 && std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

// ---------------------------------------------------------------------------
// Matrix CSV I/O: header `dim=d`, then d rows of 2d entries (re,im pairs).

HermMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::string header;
  std::getline(in, header);
  int d = 0;
  if (std::sscanf(header.c_str(), "dim=%d", &d) != 1 || d <= 0)
    throw std::runtime_error("bad matrix header in " + path);
  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(d) * d);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
    if (values.size() != static_cast<std::size_t>(2 * d))
      throw std::runtime_error("bad matrix row in " + path);
    for (int j = 0; j < d; ++j) entries.emplace_back(values[2 * j], values[2 * j + 1]);
  }
  if (entries.size() != static_cast<std::size_t>(d) * d)
    throw std::runtime_error("matrix row count mismatch in " + path);
  return HermMatrix(d, std::move(entries));
}

void write_matrix_csv(const HermMatrix& mat, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  out << "dim=" << mat.dim() << "\n";
  char buf[64];
  for (int i = 0; i < mat.dim(); ++i) {
    for (int j = 0; j < mat.dim(); ++j) {
      const Complex z = mat.at(i, j);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", z.real(), z.imag());
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace specrange
