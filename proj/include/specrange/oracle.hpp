#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "specrange/coeffs.hpp"
#include "specrange/interval.hpp"

namespace specrange {

/// Dense Hermitian matrix at oracle (desk) scale. Construction verifies
/// hermiticity to 1e-12 relative.
class HermMatrix {
 public:
  HermMatrix(int dim, std::vector<Complex> entries);

  static HermMatrix diagonal(std::span<const double> values);
  static HermMatrix zero(int dim);

  int dim() const { return dim_; }
  Complex at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
  const std::vector<Complex>& entries() const { return entries_; }

  std::vector<Complex> apply(std::span<const Complex> u) const;
  /// <A u, u> for unit-normalized input is real up to rounding; the real part
  /// is returned.
  double quadratic_form(std::span<const Complex> u) const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

struct Eigensystem {
  std::vector<double> values;       // ascending
  std::vector<Complex> vectors;     // column-major, column i pairs with values[i]
  int dim = 0;

  Complex vector_at(int row, int col) const {
    return vectors[static_cast<std::size_t>(row) * dim + col];
  }
};

/// Cyclic complex Jacobi diagonalization; off-diagonal Frobenius mass is
/// reduced below 1e-12 relative to the matrix norm.
Eigensystem jacobi_eigen(const HermMatrix& mat);

/// Closure of the numerical range of a Hermitian matrix: [lambda_min, lambda_max].
Interval numerical_range_interval(const HermMatrix& mat);

/// Joint numerical range samples (<A_1 u,u>, ..., <A_n u,u>) for N random
/// complex-Gaussian unit vectors; the canonical basis vectors are always
/// included, so the result has N + dim entries.
std::vector<std::vector<double>> sample_joint_range(std::span<const HermMatrix> mats,
                                                    int count, std::uint64_t seed);

/// Roots of t_{alpha(u)}(w) over the sampled unit vectors (same sampling as
/// sample_joint_range); requires polynomial coefficient functions. Zero
/// polynomials are skipped.
std::vector<Complex> sample_wt(std::span<const HermMatrix> mats, const ProblemSpec& spec,
                               int count, std::uint64_t seed);

/// ||T(w)^{-1}|| = 1/sigma_min(T(w)) via inverse power iteration on T* T with
/// LU solves; +inf when T(w) is singular.
double resolvent_norm(std::span<const HermMatrix> mats, const ProblemSpec& spec,
                      Complex w);

/// y(A) by eigendecomposition: map the eigenvalues through y and recompose.
HermMatrix apply_borel(const HermMatrix& mat, const std::function<double(double)>& y);

/// All roots of the polynomial sum c_k z^k (coefficients lowest order first)
/// by Aberth-Ehrlich simultaneous iteration. The zero polynomial yields an
/// empty list.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

/// Random complex-Gaussian unit vectors, seeded; used by the samplers.
class UnitVectorSampler {
 public:
  explicit UnitVectorSampler(int dim, std::uint64_t seed);
  std::vector<Complex> next();

 private:
  int dim_;
  std::uint64_t state_[2];
};

/// Matrix I/O: CSV of interleaved real,imag entries, row-major, one-line
/// header `dim=d`.
HermMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const HermMatrix& mat, const std::string& path);

}  // namespace specrange
