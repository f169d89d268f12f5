#include "shorres/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shorres {

namespace {

constexpr double kStateTol = 1e-10;

void check_p(double p) {
  if (!(p >= 1.0 && p <= 2.0))
    throw std::domain_error("l_{1,p} coherence requires p in [1, 2], got " + std::to_string(p));
}

void check_oracle_dim(const DensityMatrix& rho) {
  if (rho.dim() > kMaxOracleDim)
    throw std::domain_error("density-matrix oracle limited to dim <= " + std::to_string(kMaxOracleDim));
}

// f(rho) = V diag(f(max(lambda, 0))) V^dagger, with eigenvalues under kEigenClamp set to 0.
template <class F>
Eigen::MatrixXcd hermitian_function(const DensityMatrix& rho, F f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) < kEigenClamp ? 0.0 : f(lam(i));
  const Eigen::MatrixXcd& v = es.eigenvectors();
  return v * lam.cast<cplx>().asDiagonal() * v.adjoint();
}

double entropy_bits(const Eigen::VectorXd& probs) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double q = probs(i);
    if (q > kEigenClamp) s -= q * std::log2(q);
  }
  return s;
}

}  // namespace

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::domain_error("alpha must lie in (0,1) U (1,2], got " + std::to_string(alpha));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw std::domain_error("density matrix must be square and non-empty");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kStateTol)
    throw std::domain_error("density matrix is not Hermitian");
  if (std::abs(entries_.trace() - cplx{1.0}) > kStateTol)
    throw std::domain_error("density matrix trace differs from 1");
  if (entries_.rows() <= kMaxOracleDim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTol)
      throw std::domain_error("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(std::span<const cplx> amplitudes) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) v(static_cast<Eigen::Index>(i)) = amplitudes[i];
  return DensityMatrix(v * v.adjoint());
}

double relative_entropy_coherence_pure(std::span<const cplx> amplitudes) {
  double s = 0.0;
  for (const auto& c : amplitudes) {
    const double q = std::norm(c);
    if (q > 0.0) s -= q * std::log2(q);
  }
  return s;
}

double tsallis_coherence_pure(std::span<const cplx> amplitudes, AlphaParam alpha) {
  if (alpha.uses_limit()) return std::numbers::ln2 * relative_entropy_coherence_pure(amplitudes);
  const double a = alpha.value();
  const double exponent = 1.0 / a;
  double sum = 0.0;
  for (const auto& c : amplitudes) {
    const double q = std::norm(c);
    if (q > 0.0) sum += std::pow(q, exponent);
  }
  return (sum - 1.0) / (a - 1.0);
}

double tsallis_coherence_density(const DensityMatrix& rho, AlphaParam alpha) {
  check_oracle_dim(rho);
  if (alpha.uses_limit()) return std::numbers::ln2 * relative_entropy_coherence(rho);
  const double a = alpha.value();
  const Eigen::MatrixXcd powered = hermitian_function(rho, [a](double x) { return std::pow(x, a); });
  double sum = 0.0;
  for (int i = 0; i < rho.dim(); ++i) sum += std::pow(std::max(powered(i, i).real(), 0.0), 1.0 / a);
  return (sum - 1.0) / (a - 1.0);
}

double relative_entropy_coherence(const DensityMatrix& rho) {
  check_oracle_dim(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd diag = rho.entries().diagonal().real();
  return entropy_bits(diag) - entropy_bits(es.eigenvalues());
}

double l1p_coherence_pure(std::span<const cplx> amplitudes, double p) {
  check_p(p);
  // Neumaier-compensated total of |c_i|^p, then each column drops its own term.
  double total = 0.0, comp = 0.0;
  for (const auto& c : amplitudes) {
    const double term = std::pow(std::abs(c), p);
    const double t = total + term;
    comp += std::abs(total) >= term ? (total - t) + term : (term - t) + total;
    total = t;
  }
  total += comp;
  double out = 0.0;
  for (const auto& c : amplitudes) {
    const double mod = std::abs(c);
    if (mod == 0.0) continue;
    const double rest = std::max(total - std::pow(mod, p), 0.0);
    out += mod * std::pow(rest, 1.0 / p);
  }
  return out;
}

double lqp_norm(const Eigen::MatrixXcd& a, double q, double p) {
  if (!(p >= 1.0) || !(q >= 1.0) || std::isinf(p) || std::isinf(q))
    throw std::domain_error("lqp_norm requires finite p, q >= 1");
  double outer = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) col += std::pow(std::abs(a(i, j)), p);
    outer += std::pow(std::pow(col, 1.0 / p), q);
  }
  return std::pow(outer, 1.0 / q);
}

double l1p_coherence_density(const DensityMatrix& rho, double p) {
  check_p(p);
  check_oracle_dim(rho);
  Eigen::MatrixXcd off = rho.entries();
  off.diagonal().setZero();
  return lqp_norm(off, 1.0, p);
}

double geometric_coherence_pure(std::span<const cplx> amplitudes) {
  double best = 0.0;
  for (const auto& c : amplitudes) best = std::max(best, std::norm(c));
  return 1.0 - best;
}

double skew_info_coherence(const DensityMatrix& rho) {
  check_oracle_dim(rho);
  const Eigen::MatrixXcd root = hermitian_function(rho, [](double x) { return std::sqrt(x); });
  double sum = 0.0;
  for (int j = 0; j < rho.dim(); ++j) {
    const double d = root(j, j).real();
    sum += d * d;
  }
  return 1.0 - sum;
}

}  // namespace shorres
