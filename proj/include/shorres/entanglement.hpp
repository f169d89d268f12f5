#pragma once

// Geometric entanglement under the symmetric product-state ansatz
// |eta(alpha)>^{(x)n}, eta = cos(alpha/2)|0> + sin(alpha/2)|1>, the Hamming-weight
// closed forms for the second and third circuit states, and a brute-force
// general-product-state oracle for n <= 3 qubits.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "shorres/numtheory.hpp"
#include "shorres/statevec.hpp"

namespace shorres {

/// Hamming weights of the composite basis labels.
///
/// weights_ab[a + b r] = popcount((a + b r) 2^L + (x^a mod N)) for every
/// j = a + b r < Q; when r | Q this is the full r x m table. weights_as holds
/// the r x r table popcount(s m 2^L + (x^a mod N)) at [a * r + s] and is only
/// present when r | Q.
struct HammingTable {
  int n = 0;
  u64 r = 0;
  u64 Q = 0;
  std::optional<u64> m;
  std::vector<int> weights_ab;
  std::optional<std::vector<int>> weights_as;

  int ab(u64 a, u64 b) const { return weights_ab.at(a + b * r); }
  int as(u64 a, u64 s) const { return weights_as.value().at(a * r + s); }
};

HammingTable build_hamming_table(const ShorInstance& instance);

/// max over alpha of cos^{n-w}(alpha/2) sin^w(alpha/2), i.e.
/// ((n-w)/n)^{(n-w)/2} (w/n)^{w/2} with 0^0 = 1.
double weight_term_max(int n, int w);

/// Angle 2 arccos sqrt((n-w)/n) attaining weight_term_max.
double weight_term_argmax(int n, int w);

/// conj-amplitude mass per Hamming weight: profile[w] = sum_{|x|=w} conj(c_x).
/// The symmetric overlap only depends on the state through this profile.
std::vector<cplx> weight_profile(std::span<const cplx> amplitudes, int n);

/// <psi|phi(alpha)> = sum_x conj(c_x) cos^{n-|x|}(alpha/2) sin^{|x|}(alpha/2).
cplx symmetric_overlap(const PureState& state, double alpha_angle);
cplx symmetric_overlap(std::span<const cplx> profile, double alpha_angle);

struct SymmetricOptimum {
  double entanglement = 0.0;  // 1 - max |overlap|^2
  double alpha_angle = 0.0;   // maximizer in [0, pi]
  double overlap_sq = 0.0;
};

inline constexpr int kSymmetricGridPoints = 2048;
inline constexpr double kGoldenTolerance = 1e-10;

/// Grid over [0, pi] followed by golden-section refinement of the best cell.
SymmetricOptimum geometric_entanglement_symmetric(const PureState& state,
                                                  int grid_points = kSymmetricGridPoints);
SymmetricOptimum geometric_entanglement_symmetric(std::span<const cplx> amplitudes, int n,
                                                  int grid_points = kSymmetricGridPoints);

struct Psi2ClosedForm {
  double value = 0.0;
  double weight_sum = 0.0;  // S = sum of per-term maxima
  bool exact_divisibility = true;
  bool physical = true;  // value in [0, 1]
};

/// 1 - S^2 / Q with S = sum over the n_{a,b} table.
Psi2ClosedForm closed_form_Eg_psi2(const HammingTable& table);

struct Psi3ClosedForm {
  double literal = 0.0;          // 1 - Re(S^2) / r^2
  double modulus_squared = 0.0;  // 1 - |S|^2 / r^2
  cplx weight_sum{};             // S = sum e^{-2 pi i s a / r} (per-term maxima)
  bool physical = true;

  /// Reading of the squared complex sum adopted for reports and variations.
  double canonical() const { return modulus_squared; }
};

/// Throws std::domain_error when r does not divide Q.
Psi3ClosedForm closed_form_Eg_psi3(const HammingTable& table);

enum class GammaRelation { CoherenceExceeds, Equal, EntanglementExceeds };

struct GammaReport {
  double gamma = 0.0;
  double upper_bound = 0.0;  // Q for the n_{a,b} kind, r^2 for m_{a,s}
  bool within_bounds = false;
  bool degenerate = false;   // gamma == 0
  GammaRelation relation = GammaRelation::Equal;
  /// |C_g + (1 - E_g) / gamma - 1| using the supplied C_g and closed-form E_g.
  double identity_residual = 0.0;
};

/// gamma(n, n_{a,b}) = S^2 checked against C_g of the simulated second state.
GammaReport gamma_factor_psi2(const HammingTable& table, double coherence_g);

/// gamma(n, m_{a,s}) = |S|^2 checked against C_g of the simulated third state.
GammaReport gamma_factor_psi3(const HammingTable& table, double coherence_g);

/// 1 - max |<psi| (x)_s eta_s>|^2 over independent single-qubit states, n <= 3.
/// Throws std::domain_error for larger states.
double bruteforce_geometric_entanglement(std::span<const cplx> amplitudes);

}  // namespace shorres
