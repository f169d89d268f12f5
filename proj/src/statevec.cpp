#include "shorres/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace shorres {

namespace {

void check_register_bits(int t, int L) {
  if (t < 1 || L < 0) throw std::domain_error("register layout needs t >= 1 and L >= 0");
  if (t + L > kMaxTotalQubits)
    throw std::domain_error("register layout exceeds " + std::to_string(kMaxTotalQubits) +
                            " qubits");
}

// In-place radix-2 transform of a power-of-two length vector,
// out[k] = sum_j in[j] exp(sign * 2 pi i j k / n) / sqrt(n).
void unitary_dft(std::vector<cplx>& v, const std::vector<cplx>& twiddles) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = v[start + k];
        const cplx w = v[start + k + half] * twiddles[k * stride];
        v[start + k] = u + w;
        v[start + k + half] = u - w;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& a : v) a *= scale;
}

PureState transform_register_a(const PureState& state, double sign) {
  const RegisterLayout& lay = state.layout();
  const std::size_t q = lay.register_a_dim();
  const std::size_t bdim = lay.register_b_dim();

  std::vector<cplx> twiddles(std::max<std::size_t>(q / 2, 1));
  for (std::size_t k = 0; k < twiddles.size(); ++k)
    twiddles[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(q));

  std::vector<cplx> out(state.size());
  std::vector<cplx> block(q);
  for (std::size_t y = 0; y < bdim; ++y) {
    bool any = false;
    for (std::size_t j = 0; j < q; ++j) {
      block[j] = state[lay.index(j, y)];
      any = any || block[j] != cplx{};
    }
    if (!any) continue;
    unitary_dft(block, twiddles);
    for (std::size_t k = 0; k < q; ++k) out[lay.index(k, y)] = block[k];
  }
  return PureState(lay, std::move(out));
}

}  // namespace

RegisterLayout::RegisterLayout(int t_qubits, int l_qubits) : t(t_qubits), L(l_qubits) {
  check_register_bits(t, L);
}

PureState::PureState(RegisterLayout layout, std::vector<cplx> amplitudes)
    : layout_(layout), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.dim())
    throw std::invalid_argument("PureState: amplitude count does not match the layout");
  if (std::abs(norm_squared() - 1.0) > 1e-10) throw std::invalid_argument("PureState: amplitudes are not normalized");
}

double PureState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

std::vector<std::size_t> PureState::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    if (std::abs(amplitudes_[i]) > kAmplitudeCutoff) out.push_back(i);
  return out;
}

std::vector<std::size_t> PureState::register_b_support() const {
  std::vector<double> marginal(layout_.register_b_dim(), 0.0);
  const std::size_t mask = layout_.register_b_dim() - 1;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) marginal[i & mask] += std::norm(amplitudes_[i]);
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < marginal.size(); ++y)
    if (marginal[y] > kAmplitudeCutoff * kAmplitudeCutoff) out.push_back(y);
  return out;
}

PureState PureState::cleaned() const {
  std::vector<cplx> amps = amplitudes_;
  for (auto& a : amps)
    if (std::abs(a) <= kAmplitudeCutoff) a = cplx{};
  return PureState(layout_, std::move(amps));
}

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

std::vector<std::size_t> OutcomeDistribution::support(double threshold) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < probabilities.size(); ++k)
    if (probabilities[k] > threshold) out.push_back(k);
  return out;
}

PureState init_state(RegisterLayout layout) {
  if (layout.L < 1) throw std::domain_error("init_state: register B needs a qubit to hold |1>");
  std::vector<cplx> amps(layout.dim());
  amps[layout.index(0, 1)] = 1.0;
  return PureState(layout, std::move(amps));
}

PureState apply_hadamard_layer(const PureState& state) {
  const RegisterLayout& lay = state.layout();
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  const double h = 1.0 / std::numbers::sqrt2;
  for (int q = 0; q < lay.t; ++q) {
    const std::size_t bit = std::size_t{1} << (lay.L + q);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (i & bit) continue;
      const cplx a = amps[i];
      const cplx b = amps[i | bit];
      amps[i] = (a + b) * h;
      amps[i | bit] = (a - b) * h;
    }
  }
  return PureState(lay, std::move(amps));
}

PureState apply_modexp_unitary(const PureState& state, const ShorInstance& instance) {
  const RegisterLayout& lay = state.layout();
  const u64 N = instance.N;
  if (gcd(instance.x, N) != 1) throw std::domain_error("apply_modexp_unitary: gcd(x, N) != 1");
  if (lay.register_b_dim() < N) throw std::domain_error("apply_modexp_unitary: register B too small");

  const std::size_t q = lay.register_a_dim();
  const std::size_t bdim = lay.register_b_dim();
  std::vector<cplx> out(state.size());
  u64 power = 1;  // x^j mod N
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t y = 0; y < bdim; ++y) {
      const cplx a = state[lay.index(j, y)];
      if (a == cplx{}) continue;
      const std::size_t target = y < N ? static_cast<std::size_t>(power * y % N) : y;
      out[lay.index(j, target)] = a;
    }
    power = power * (instance.x % N) % N;
  }
  return PureState(lay, std::move(out));
}

PureState apply_inverse_qft_A(const PureState& state) { return transform_register_a(state, -1.0); }

PureState apply_qft_A(const PureState& state) { return transform_register_a(state, +1.0); }

RegisterLayout layout_for(const ShorInstance& instance) { return RegisterLayout(instance.t, instance.L); }

PureState ideal_psi3(const ShorInstance& instance) {
  if (!instance.r) throw std::domain_error("ideal_psi3: order r unknown");
  const u64 r = *instance.r;
  if (!instance.m || instance.Q % r != 0)
    throw std::domain_error("ideal_psi3 requires r to divide Q (m = Q/r must be an integer)");
  const u64 m = *instance.m;
  const RegisterLayout lay = layout_for(instance);

  // Sparse accumulation of the r^2 terms, then densified.
  std::vector<std::pair<std::size_t, cplx>> terms;
  terms.reserve(r * r);
  u64 power = 1;
  for (u64 a = 0; a < r; ++a) {
    for (u64 s = 0; s < r; ++s) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((a * s) % r) /
                           static_cast<double>(r);
      terms.emplace_back(lay.index(s * m, power), std::polar(1.0 / static_cast<double>(r), phase));
    }
    power = power * instance.x % instance.N;
  }
  std::vector<cplx> amps(lay.dim());
  for (const auto& [idx, amp] : terms) amps[idx] += amp;
  return PureState(lay, std::move(amps));
}

PipelineStates run_pipeline(const ShorInstance& instance) {
  const RegisterLayout lay = layout_for(instance);
  PureState psi1 = apply_hadamard_layer(init_state(lay));
  PureState psi2 = apply_modexp_unitary(psi1, instance);
  PureState psi3 = apply_inverse_qft_A(psi2);
  return {std::move(psi1), std::move(psi2), std::move(psi3)};
}

OutcomeDistribution measurement_distribution_A(const PureState& state) {
  const RegisterLayout& lay = state.layout();
  OutcomeDistribution d;
  d.probabilities.assign(lay.register_a_dim(), 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) d.probabilities[i >> lay.L] += std::norm(state[i]);
  return d;
}

namespace {

using i128 = __int128;

// Q * s - k * r, i.e. r Q delta for delta = s/r - k/Q.
i128 scaled_offset(std::uint64_t k, std::uint64_t s, std::uint64_t r, std::uint64_t Q) {
  return static_cast<i128>(Q) * s - static_cast<i128>(k) * r;
}

double positive_mod_ratio(i128 num, i128 den) {
  i128 rem = num % den;
  if (rem < 0) rem += den;
  return static_cast<double>(rem) / static_cast<double>(den);
}

void check_eq6_args(std::uint64_t k, std::uint64_t r, std::uint64_t Q) {
  if (r == 0 || Q == 0) throw std::domain_error("eq6: r and Q must be positive");
  if (k >= Q) throw std::domain_error("eq6: k must be < Q");
}

}  // namespace

double eq6_probability(std::uint64_t k, std::uint64_t r, std::uint64_t Q) {
  check_eq6_args(k, r, Q);
  const double qd = static_cast<double>(Q);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < r; ++s) {
    const i128 num = scaled_offset(k, s, r, Q);
    if (num == 0) {
      sum += 1.0;
      continue;
    }
    if (num % static_cast<i128>(r) == 0) continue;  // sin(pi Q delta) vanishes exactly
    // sin(pi Q delta) with Q delta = num / r, reduced modulo 2.
    const double top = std::sin(std::numbers::pi * 2.0 * positive_mod_ratio(num, 2 * static_cast<i128>(r)));
    const double bottom = qd * std::sin(std::numbers::pi * static_cast<double>(num) /
                                        (static_cast<double>(r) * qd));
    const double ratio = top / bottom;
    sum += ratio * ratio;
  }
  return sum / static_cast<double>(r);
}

double eq6_probability_direct(std::uint64_t k, std::uint64_t r, std::uint64_t Q) {
  check_eq6_args(k, r, Q);
  const i128 period = static_cast<i128>(r) * Q;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < r; ++s) {
    const i128 num = scaled_offset(k, s, r, Q);
    cplx inner{};
    for (std::uint64_t j = 0; j < Q; ++j) {
      const double frac = positive_mod_ratio(num * static_cast<i128>(j), period);
      inner += std::polar(1.0, 2.0 * std::numbers::pi * frac);
    }
    inner /= static_cast<double>(Q);
    sum += std::norm(inner);
  }
  return sum / static_cast<double>(r);
}

double eq6_probability_checked(std::uint64_t k, std::uint64_t r, std::uint64_t Q, double tol) {
  const double closed = eq6_probability(k, r, Q);
  const double direct = eq6_probability_direct(k, r, Q);
  if (std::abs(closed - direct) > tol)
    throw std::logic_error("eq6: closed form " + std::to_string(closed) +
                           " disagrees with direct sum " + std::to_string(direct) +
                           " at k=" + std::to_string(k));
  return closed;
}

OutcomeDistribution eq6_distribution(std::uint64_t r, std::uint64_t Q) {
  OutcomeDistribution d;
  d.probabilities.resize(Q);
  for (std::uint64_t k = 0; k < Q; ++k) d.probabilities[k] = eq6_probability(k, r, Q);
  return d;
}

OutcomeSampler::OutcomeSampler(const OutcomeDistribution& distribution, std::uint64_t seed)
    : engine_(seed) {
  if (distribution.probabilities.empty()) throw std::invalid_argument("OutcomeSampler: empty distribution");
  cdf_.resize(distribution.probabilities.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf_.size(); ++k) {
    acc += std::max(distribution.probabilities[k], 0.0);
    cdf_[k] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("OutcomeSampler: distribution has no mass");
}

std::size_t OutcomeSampler::next() {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53 * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) {
    // u rounded up to the total mass; take the last outcome that has any.
    --it;
    while (it != cdf_.begin() && *(it - 1) == *it) --it;
  }
  return static_cast<std::size_t>(it - cdf_.begin());
}

std::size_t sample_outcome(const OutcomeDistribution& distribution, std::uint64_t seed) {
  return OutcomeSampler(distribution, seed).next();
}

std::string dump_state_json(const PureState& state) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (std::abs(state[i]) <= kAmplitudeCutoff) continue;
    arr.push_back({i, state[i].real(), state[i].imag()});
  }
  return arr.dump();
}

}  // namespace shorres
