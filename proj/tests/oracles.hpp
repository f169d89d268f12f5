#pragma once

// Slow, independent reference implementations used only by the tests.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

inline std::vector<cplx> random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(dim);
  double norm = 0.0;
  for (auto& c : v) {
    c = {g(rng), g(rng)};
    norm += std::norm(c);
  }
  for (auto& c : v) c /= std::sqrt(norm);
  return v;
}

inline Eigen::MatrixXcd outer(const std::vector<cplx>& v) {
  Eigen::VectorXcd col(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) col(static_cast<Eigen::Index>(i)) = v[i];
  return col * col.adjoint();
}

// Random full-rank mixed state: normalized G G^dagger.
inline Eigen::MatrixXcd random_mixed(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace().real();
}

// Eigenvalues below 1e-12 are roundoff on rank-deficient inputs and count as 0.
inline Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& rho, double a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  Eigen::VectorXd ev = es.eigenvalues().unaryExpr([a](double x) { return x > 1e-12 ? std::pow(x, a) : 0.0; });
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double tsallis(const Eigen::MatrixXcd& rho, double a) {
  const Eigen::MatrixXcd pa = matrix_power(rho, a);
  double sum = 0.0;
  for (int i = 0; i < rho.rows(); ++i) sum += std::pow(std::max(pa(i, i).real(), 0.0), 1.0 / a);
  return (sum - 1.0) / (a - 1.0);
}

inline double l1p(const Eigen::MatrixXcd& rho, double p) {
  double total = 0.0;
  for (int j = 0; j < rho.cols(); ++j) {
    double col = 0.0;
    for (int i = 0; i < rho.rows(); ++i)
      if (i != j) col += std::pow(std::abs(rho(i, j)), p);
    total += std::pow(col, 1.0 / p);
  }
  return total;
}

inline double entropy_bits(const Eigen::VectorXd& ev) {
  double s = 0.0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-15) s -= ev(i) * std::log2(ev(i));
  return s;
}

inline double relative_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  return entropy_bits(rho.diagonal().real()) - entropy_bits(es.eigenvalues());
}

inline double skew(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd root = matrix_power(rho, 0.5);
  double s = 0.0;
  for (int i = 0; i < rho.rows(); ++i) s += std::norm(root(i, i));
  return 1.0 - s;
}

// Textbook O(Q^2) DFT on register A, independently per register-B value.
inline std::vector<cplx> dft_register_a(const std::vector<cplx>& amps, int t, int L, int sign) {
  const std::size_t Q = std::size_t{1} << t, B = std::size_t{1} << L;
  std::vector<cplx> out(amps.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(Q));
  for (std::size_t y = 0; y < B; ++y)
    for (std::size_t k = 0; k < Q; ++k) {
      cplx acc{};
      for (std::size_t j = 0; j < Q; ++j) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % Q) / static_cast<double>(Q);
        acc += amps[j * B + y] * std::polar(1.0, ang);
      }
      out[k * B + y] = acc * norm;
    }
  return out;
}

// Outcome probability by brute summation in long double.
inline double outcome_probability(unsigned long long k, unsigned long long r, unsigned long long Q) {
  long double total = 0.0L;
  const long double pi = std::numbers::pi_v<long double>;
  for (unsigned long long s = 0; s < r; ++s) {
    long double re = 0.0L, im = 0.0L;
    for (unsigned long long l = 0; l < Q; ++l) {
      const long double ang = 2.0L * pi * static_cast<long double>(l) *
                              (static_cast<long double>(s) / r - static_cast<long double>(k) / Q);
      re += std::cos(ang);
      im += std::sin(ang);
    }
    total += (re * re + im * im) / (static_cast<long double>(Q) * Q);
  }
  return static_cast<double>(total / r);
}

// max over alpha of |<eta^(x)n|psi>|^2 with eta = (cos a/2, sin a/2), dense scan.
inline double symmetric_overlap_scan(const std::vector<cplx>& amps, int n, int points) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double a = std::numbers::pi * i / points;
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    cplx acc{};
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
      const int w = __builtin_popcountll(idx);
      acc += std::conj(amps[idx]) * std::pow(c, n - w) * std::pow(s, w);
    }
    best = std::max(best, std::norm(acc));
  }
  return best;
}

}  // namespace oracle
