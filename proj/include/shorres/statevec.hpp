#pragma once

// Dense pure-state simulation of the order-finding circuit.
//
// Basis convention: joint index = j * 2^L + y, with j the register-A value
// and y the register-B value. The n-bit label of a joint index is the
// concatenation (j, y), so its Hamming weight is popcount(index).

#include <complex>
#include <random>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shorres/numtheory.hpp"

namespace shorres {

using cplx = std::complex<double>;

/// Amplitudes below this modulus are treated as exact zeros for supports.
inline constexpr double kAmplitudeCutoff = 1e-12;

/// Largest joint register accepted by the dense simulator.
inline constexpr int kMaxTotalQubits = 24;

struct RegisterLayout {
  int t = 0;
  int L = 0;

  RegisterLayout() = default;
  RegisterLayout(int t_qubits, int l_qubits);

  int total_qubits() const { return t + L; }
  std::size_t register_a_dim() const { return std::size_t{1} << t; }
  std::size_t register_b_dim() const { return std::size_t{1} << L; }
  std::size_t dim() const { return std::size_t{1} << (t + L); }
  std::size_t index(std::size_t j, std::size_t y) const { return (j << L) | y; }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;
};

class PureState {
 public:
  PureState(RegisterLayout layout, std::vector<cplx> amplitudes);

  const RegisterLayout& layout() const { return layout_; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }
  std::size_t size() const { return amplitudes_.size(); }

  double norm_squared() const;

  /// Joint indices whose amplitude modulus exceeds kAmplitudeCutoff.
  std::vector<std::size_t> support() const;

  /// Register-B values carrying probability above kAmplitudeCutoff^2.
  std::vector<std::size_t> register_b_support() const;

  /// Copy with sub-cutoff amplitudes set to exactly zero.
  PureState cleaned() const;

 private:
  RegisterLayout layout_;
  std::vector<cplx> amplitudes_;
};

struct OutcomeDistribution {
  std::vector<double> probabilities;  // indexed by register-A outcome k

  double total() const;
  /// Outcomes with probability above the threshold.
  std::vector<std::size_t> support(double threshold = kAmplitudeCutoff * kAmplitudeCutoff) const;
};

PureState init_state(RegisterLayout layout);

/// H on every register-A qubit.
PureState apply_hadamard_layer(const PureState& state);

/// |j>|y> -> |j>|x^j y mod N> for y < N; y >= N is left untouched.
PureState apply_modexp_unitary(const PureState& state, const ShorInstance& instance);

/// Size-Q DFT on register A for each fixed register-B value, kernel
/// exp(-2 pi i j k / Q) / sqrt(Q).
PureState apply_inverse_qft_A(const PureState& state);

/// Forward counterpart, kernel exp(+2 pi i j k / Q) / sqrt(Q).
PureState apply_qft_A(const PureState& state);

/// (1/r) sum_{s,a} exp(-2 pi i a s / r) |s m>|x^a mod N>; requires r | Q.
PureState ideal_psi3(const ShorInstance& instance);

/// The three circuit states psi1, psi2, psi3 in order.
struct PipelineStates {
  PureState psi1;
  PureState psi2;
  PureState psi3;
};

PipelineStates run_pipeline(const ShorInstance& instance);

RegisterLayout layout_for(const ShorInstance& instance);

OutcomeDistribution measurement_distribution_A(const PureState& state);

/// Closed geometric-series form |sin(pi Q d) / (Q sin(pi d))|^2 averaged over s,
/// with d = s/r - k/Q.
double eq6_probability(std::uint64_t k, std::uint64_t r, std::uint64_t Q);

/// Direct O(Q) evaluation of the inner sum.
double eq6_probability_direct(std::uint64_t k, std::uint64_t r, std::uint64_t Q);

/// Both paths; throws std::logic_error if they disagree by more than tol.
double eq6_probability_checked(std::uint64_t k, std::uint64_t r, std::uint64_t Q,
                               double tol = 1e-9);

/// Closed-form probabilities for every k in [0, Q).
OutcomeDistribution eq6_distribution(std::uint64_t r, std::uint64_t Q);

/// Inverse-CDF sampling driven by a seeded std::mt19937_64. The mapping from
/// generator output to [0, 1) is explicit (top 53 bits), so identical seeds give
/// identical sequences across standard libraries.
class OutcomeSampler {
 public:
  OutcomeSampler(const OutcomeDistribution& distribution, std::uint64_t seed);

  std::size_t next();

 private:
  std::vector<double> cdf_;
  std::mt19937_64 engine_;
};

std::size_t sample_outcome(const OutcomeDistribution& distribution, std::uint64_t seed);

/// JSON array of [index, re, im] for amplitudes above the cutoff, sorted by index.
std::string dump_state_json(const PureState& state);

}  // namespace shorres
