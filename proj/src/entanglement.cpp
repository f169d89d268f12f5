#include "shorres/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace shorres {

namespace {

double pow0(double base, double exponent) {
  // 0^0 := 1 for weights 0 and n.
  if (exponent == 0.0) return 1.0;
  return std::pow(base, exponent);
}

double symmetric_fidelity(std::span<const cplx> profile, double alpha) {
  return std::norm(symmetric_overlap(profile, alpha));
}

}  // namespace

HammingTable build_hamming_table(const ShorInstance& instance) {
  if (!instance.r) throw std::domain_error("build_hamming_table: order r unknown");
  HammingTable table;
  table.n = instance.total_qubits();
  table.r = *instance.r;
  table.Q = instance.Q;
  table.m = instance.m;

  std::vector<u64> residues(table.r);
  u64 power = 1;
  for (u64 a = 0; a < table.r; ++a) {
    residues[a] = power;
    power = power * instance.x % instance.N;
  }

  table.weights_ab.resize(instance.Q);
  for (u64 j = 0; j < instance.Q; ++j)
    table.weights_ab[j] = std::popcount((j << instance.L) | residues[j % table.r]);

  if (table.m) {
    std::vector<int> as(table.r * table.r);
    for (u64 a = 0; a < table.r; ++a)
      for (u64 s = 0; s < table.r; ++s)
        as[a * table.r + s] = std::popcount(((s * *table.m) << instance.L) | residues[a]);
    table.weights_as = std::move(as);
  }
  return table;
}

double weight_term_max(int n, int w) {
  if (n <= 0 || w < 0 || w > n) throw std::domain_error("weight_term_max: need 0 <= w <= n, n > 0");
  const double nd = n;
  return pow0((n - w) / nd, (n - w) / 2.0) * pow0(w / nd, w / 2.0);
}

double weight_term_argmax(int n, int w) {
  if (n <= 0 || w < 0 || w > n) throw std::domain_error("weight_term_argmax: need 0 <= w <= n, n > 0");
  return 2.0 * std::acos(std::sqrt(static_cast<double>(n - w) / n));
}

std::vector<cplx> weight_profile(std::span<const cplx> amplitudes, int n) {
  if (n < 0 || n > 63 || amplitudes.size() > (std::size_t{1} << n))
    throw std::domain_error("weight_profile: amplitude count exceeds 2^n");
  std::vector<cplx> profile(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    if (amplitudes[i] != cplx{}) profile[std::popcount(i)] += std::conj(amplitudes[i]);
  return profile;
}

cplx symmetric_overlap(std::span<const cplx> profile, double alpha_angle) {
  const int n = static_cast<int>(profile.size()) - 1;
  const double c = std::cos(alpha_angle / 2.0);
  const double s = std::sin(alpha_angle / 2.0);
  cplx sum{};
  for (int w = 0; w <= n; ++w) {
    if (profile[w] == cplx{}) continue;
    sum += profile[w] * (pow0(c, n - w) * pow0(s, w));
  }
  return sum;
}

cplx symmetric_overlap(const PureState& state, double alpha_angle) {
  return symmetric_overlap(weight_profile(state.amplitudes(), state.layout().total_qubits()), alpha_angle);
}

SymmetricOptimum geometric_entanglement_symmetric(std::span<const cplx> amplitudes, int n,
                                                  int grid_points) {
  if (grid_points < 2) throw std::domain_error("geometric_entanglement_symmetric: grid too coarse");
  const std::vector<cplx> profile = weight_profile(amplitudes, n);
  const double pi = std::numbers::pi;
  const double step = pi / grid_points;

  int best_i = 0;
  double best_f = -1.0;
  for (int i = 0; i <= grid_points; ++i) {
    const double f = symmetric_fidelity(profile, i * step);
    if (f > best_f) {
      best_f = f;
      best_i = i;
    }
  }

  double lo = std::max(0.0, (best_i - 1) * step);
  double hi = std::min(pi, (best_i + 1) * step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = symmetric_fidelity(profile, x1);
  double f2 = symmetric_fidelity(profile, x2);
  while (hi - lo > kGoldenTolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = symmetric_fidelity(profile, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = symmetric_fidelity(profile, x1);
    }
  }

  SymmetricOptimum out;
  const double mid = 0.5 * (lo + hi);
  const double f_mid = symmetric_fidelity(profile, mid);
  if (f_mid >= best_f) {
    out.alpha_angle = mid;
    out.overlap_sq = f_mid;
  } else {
    out.alpha_angle = best_i * step;
    out.overlap_sq = best_f;
  }
  out.entanglement = 1.0 - out.overlap_sq;
  return out;
}

SymmetricOptimum geometric_entanglement_symmetric(const PureState& state, int grid_points) {
  return geometric_entanglement_symmetric(state.amplitudes(), state.layout().total_qubits(), grid_points);
}

Psi2ClosedForm closed_form_Eg_psi2(const HammingTable& table) {
  if (table.Q == 0 || table.n <= 0) throw std::domain_error("closed_form_Eg_psi2: empty table");
  Psi2ClosedForm out;
  double sum = 0.0;
  for (int w : table.weights_ab) sum += weight_term_max(table.n, w);
  out.weight_sum = sum;
  out.value = 1.0 - sum * sum / static_cast<double>(table.Q);
  out.exact_divisibility = table.m.has_value();
  out.physical = out.value >= 0.0 && out.value <= 1.0;
  return out;
}

Psi3ClosedForm closed_form_Eg_psi3(const HammingTable& table) {
  if (!table.weights_as || !table.m)
    throw std::domain_error("closed_form_Eg_psi3 requires r to divide Q");
  const u64 r = table.r;
  cplx sum{};
  for (u64 a = 0; a < r; ++a) {
    for (u64 s = 0; s < r; ++s) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((a * s) % r) / static_cast<double>(r);
      sum += std::polar(weight_term_max(table.n, table.as(a, s)), phase);
    }
  }
  const double r2 = static_cast<double>(r * r);
  Psi3ClosedForm out;
  out.weight_sum = sum;
  out.literal = 1.0 - (sum * sum).real() / r2;
  out.modulus_squared = 1.0 - std::norm(sum) / r2;
  out.physical = out.literal >= 0.0 && out.literal <= 1.0 && out.modulus_squared >= 0.0 &&
                 out.modulus_squared <= 1.0;
  return out;
}

namespace {

GammaReport make_gamma_report(double gamma, double bound, double closed_eg, double coherence_g) {
  GammaReport g;
  g.gamma = gamma;
  g.upper_bound = bound;
  g.degenerate = gamma == 0.0;
  g.within_bounds = gamma > 0.0 && gamma < bound;
  if (gamma > 1.0)
    g.relation = GammaRelation::CoherenceExceeds;
  else if (gamma < 1.0)
    g.relation = GammaRelation::EntanglementExceeds;
  else
    g.relation = GammaRelation::Equal;
  g.identity_residual = g.degenerate ? std::numeric_limits<double>::infinity()
                                     : std::abs(coherence_g + (1.0 - closed_eg) / gamma - 1.0);
  return g;
}

}  // namespace

GammaReport gamma_factor_psi2(const HammingTable& table, double coherence_g) {
  const Psi2ClosedForm cf = closed_form_Eg_psi2(table);
  return make_gamma_report(cf.weight_sum * cf.weight_sum, static_cast<double>(table.Q), cf.value,
                           coherence_g);
}

GammaReport gamma_factor_psi3(const HammingTable& table, double coherence_g) {
  const Psi3ClosedForm cf = closed_form_Eg_psi3(table);
  return make_gamma_report(std::norm(cf.weight_sum), static_cast<double>(table.r * table.r),
                           cf.canonical(), coherence_g);
}

namespace {

// Largest |sum_i u_i phi_i| over product phi on the remaining qubits.
double residual_product_max(const Eigen::VectorXcd& u) {
  switch (u.size()) {
    case 1:
      return std::abs(u(0));
    case 2:
      return u.norm();
    case 4: {
      Eigen::Matrix2cd m;
      m << u(0), u(1), u(2), u(3);
      Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
      return svd.singularValues()(0);
    }
    default:
      throw std::logic_error("residual_product_max: unsupported size");
  }
}

}  // namespace

double bruteforce_geometric_entanglement(std::span<const cplx> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim)) throw std::domain_error("bruteforce: size must be 2^n, n >= 1");
  const int n = std::countr_zero(dim);
  if (n > 3) throw std::domain_error("bruteforce_geometric_entanglement handles at most 3 qubits");

  const std::size_t rest = dim / 2;
  // u(eta)[i'] = sum_b eta_b conj(psi[b, i']), first qubit is the most significant bit.
  auto objective = [&](double theta, double phi) {
    const cplx e0 = std::cos(theta / 2.0);
    const cplx e1 = std::polar(std::sin(theta / 2.0), phi);
    Eigen::VectorXcd u(static_cast<Eigen::Index>(rest));
    for (std::size_t i = 0; i < rest; ++i)
      u(static_cast<Eigen::Index>(i)) = e0 * std::conj(amplitudes[i]) + e1 * std::conj(amplitudes[rest + i]);
    return residual_product_max(u);
  };

  constexpr int kGrid = 64;
  const double pi = std::numbers::pi;
  double best = -1.0, best_theta = 0.0, best_phi = 0.0;
  for (int a = 0; a < kGrid; ++a) {
    const double theta = pi * a / (kGrid - 1);
    for (int b = 0; b < kGrid; ++b) {
      const double phi = 2.0 * pi * b / kGrid;
      const double f = objective(theta, phi);
      if (f > best) {
        best = f;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  // Compass search around the best grid point.
  double step = pi / (kGrid - 1);
  while (step > 1e-12) {
    bool improved = false;
    const double cand[4][2] = {{best_theta + step, best_phi},
                               {best_theta - step, best_phi},
                               {best_theta, best_phi + step},
                               {best_theta, best_phi - step}};
    for (const auto& c : cand) {
      const double f = objective(c[0], c[1]);
      if (f > best) {
        best = f;
        best_theta = c[0];
        best_phi = c[1];
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::max(0.0, 1.0 - best * best);
}

}  // namespace shorres
