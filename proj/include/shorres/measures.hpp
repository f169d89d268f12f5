#pragma once

// Coherence quantifiers: Tsallis relative alpha-entropy of coherence, the
// l_{1,p} norm of coherence and the geometric coherence.
//
// Pure-state functions take an amplitude vector and run in O(d); they are the
// production path. The density-matrix functions are small-dimension oracles
// built on a Hermitian eigendecomposition.

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace shorres {

using cplx = std::complex<double>;

/// Density-matrix oracles refuse anything larger.
inline constexpr int kMaxOracleDim = 256;

/// |alpha - 1| at or below this uses the ln2 * C_r limit.
inline constexpr double kAlphaLimitWindow = 1e-6;

/// Eigenvalues below this are clamped to zero before fractional powers.
inline constexpr double kEigenClamp = 1e-12;

class AlphaParam {
 public:
  /// Accepts alpha in (0, 2]; throws std::domain_error otherwise.
  explicit AlphaParam(double alpha);

  double value() const { return alpha_; }
  bool uses_limit() const { return std::abs(alpha_ - 1.0) <= kAlphaLimitWindow; }

 private:
  double alpha_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity within 1e-10.
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix from_pure(std::span<const cplx> amplitudes);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
};

/// (sum_i |c_i|^{2/alpha} - 1) / (alpha - 1); ln2 * C_r near alpha = 1.
double tsallis_coherence_pure(std::span<const cplx> amplitudes, AlphaParam alpha);

double tsallis_coherence_density(const DensityMatrix& rho, AlphaParam alpha);

/// Relative entropy of coherence in bits: S(rho_diag) - S(rho).
double relative_entropy_coherence(const DensityMatrix& rho);

/// Same quantity for a pure state, where S(rho) = 0.
double relative_entropy_coherence_pure(std::span<const cplx> amplitudes);

/// sum_j |c_j| (sum_{i != j} |c_i|^p)^{1/p}, p in [1, 2].
double l1p_coherence_pure(std::span<const cplx> amplitudes, double p);

double l1p_coherence_density(const DensityMatrix& rho, double p);

/// Raw l_{q,p} matrix norm: l_q norm of the column l_p norms. No coherence
/// interpretation outside q = 1, p in [1, 2]; q = infinity is not supported.
double lqp_norm(const Eigen::MatrixXcd& a, double q, double p);

/// 1 - max_i |c_i|^2.
double geometric_coherence_pure(std::span<const cplx> amplitudes);

/// Skew-information coherence 1 - sum_j <j|sqrt(rho)|j>^2.
double skew_info_coherence(const DensityMatrix& rho);

}  // namespace shorres
