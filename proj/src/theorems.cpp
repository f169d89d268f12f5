#include "shorres/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shorres {

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::Psi1: return "psi1";
    case Stage::Psi2: return "psi2";
    case Stage::Psi3: return "psi3";
  }
  return "unknown";
}

double tsallis_uniform(double d, AlphaParam alpha) {
  if (!(d >= 1.0)) throw std::domain_error("tsallis_uniform: dimension must be >= 1");
  if (alpha.uses_limit()) return std::log(d);
  const double a = alpha.value();
  return (std::pow(d, 1.0 - 1.0 / a) - 1.0) / (a - 1.0);
}

namespace {

void check_p(double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::domain_error("p must lie in [1, 2]");
}

}  // namespace

Psi1ClosedForms thm1_closed_forms(u64 Q, double p, AlphaParam alpha) {
  if (Q < 2) throw std::domain_error("thm1_closed_forms: Q must be >= 2");
  check_p(p);
  const double q = static_cast<double>(Q);
  return {std::pow(q - 1.0, 1.0 / p), tsallis_uniform(q, alpha), 1.0 - 1.0 / q, 0.0};
}

Psi3ClosedForms thm3_closed_forms(u64 r, double p, AlphaParam alpha) {
  if (r < 1) throw std::domain_error("thm3_closed_forms: r must be >= 1");
  check_p(p);
  const double r2 = static_cast<double>(r) * static_cast<double>(r);
  return {std::pow(r2 - 1.0, 1.0 / p), tsallis_uniform(r2, alpha), 1.0 - 1.0 / r2};
}

OperatorVariations thm4_variations(u64 Q, u64 r, double p, AlphaParam alpha, const HammingTable& table) {
  const Psi1ClosedForms first = thm1_closed_forms(Q, p, alpha);
  const Psi3ClosedForms third = thm3_closed_forms(r, p, alpha);
  OperatorVariations v;
  // U preserves every coherence value of the first state.
  v.c1p_U = 0.0;
  v.c_alpha_U = 0.0;
  v.c_g_U = 0.0;
  v.c1p_F = third.c1p - first.c1p;
  v.c_alpha_F = third.c_alpha - first.c_alpha;
  v.c_g_F = 1.0 / static_cast<double>(Q) - 1.0 / (static_cast<double>(r) * static_cast<double>(r));

  if (table.Q == Q && !table.weights_ab.empty()) {
    const Psi2ClosedForm second = closed_form_Eg_psi2(table);
    v.e_g_U = second.value - first.e_g;
    v.e_g_U_approximate = !second.exact_divisibility;
    if (table.weights_as) {
      const Psi3ClosedForm e3 = closed_form_Eg_psi3(table);
      v.e_g_F = EntanglementDelta{e3.literal - second.value, e3.modulus_squared - second.value};
    }
  }
  return v;
}

bool SignLedger::expected_signs_hold() const {
  if (!register_covers_order_squared) return false;
  return c1p_depleted && c_alpha_depleted && c_g_depleted && e_g_U_nonnegative.value_or(true);
}

VariationLedger corollary1_variations(u64 Q, u64 r, double p, AlphaParam alpha, const HammingTable& table) {
  VariationLedger ledger;
  ledger.Q = Q;
  ledger.r = r;
  ledger.p = p;
  ledger.alpha = alpha.value();
  ledger.per_operator = thm4_variations(Q, r, p, alpha, table);

  const Psi1ClosedForms first = thm1_closed_forms(Q, p, alpha);
  const Psi3ClosedForms third = thm3_closed_forms(r, p, alpha);
  const double r2 = static_cast<double>(r) * static_cast<double>(r);
  AlgorithmVariations& w = ledger.whole;
  w.c1p = std::pow(r2 - 1.0, 1.0 / p) - std::pow(static_cast<double>(Q) - 1.0, 1.0 / p);
  if (alpha.uses_limit()) {
    w.c_alpha = third.c_alpha - first.c_alpha;
  } else {
    const double a = alpha.value();
    w.c_alpha = (std::pow(r2, 1.0 - 1.0 / a) - std::pow(static_cast<double>(Q), 1.0 - 1.0 / a)) / (a - 1.0);
  }
  w.c_g = 1.0 / static_cast<double>(Q) - 1.0 / r2;
  if (table.weights_as) {
    const Psi3ClosedForm e3 = closed_form_Eg_psi3(table);
    w.e_g = EntanglementDelta{e3.literal - first.e_g, e3.modulus_squared - first.e_g};
  }

  const OperatorVariations& op = ledger.per_operator;
  double res = 0.0;
  res = std::max(res, std::abs(w.c1p - (op.c1p_U + op.c1p_F)));
  res = std::max(res, std::abs(w.c_alpha - (op.c_alpha_U + op.c_alpha_F)));
  res = std::max(res, std::abs(w.c_g - (op.c_g_U + op.c_g_F)));
  if (w.e_g && op.e_g_U && op.e_g_F) {
    res = std::max(res, std::abs(w.e_g->literal - (*op.e_g_U + op.e_g_F->literal)));
    res = std::max(res, std::abs(w.e_g->modulus_squared - (*op.e_g_U + op.e_g_F->modulus_squared)));
  }
  ledger.additivity_residual = res;

  SignLedger& s = ledger.signs;
  s.register_covers_order_squared = static_cast<double>(Q) >= r2;
  s.c1p_depleted = w.c1p < 0.0;
  s.c_alpha_depleted = w.c_alpha < 0.0;
  s.c_g_depleted = w.c_g < 0.0;
  if (op.e_g_U) s.e_g_U_nonnegative = *op.e_g_U >= 0.0;
  if (op.e_g_F) s.e_g_F_value = op.e_g_F->canonical();
  return ledger;
}

bool MeasureReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const MeasureRow& r) { return !r.gated || r.pass; });
}

const MeasureRow* MeasureReport::find(std::string_view measure, std::optional<double> parameter) const {
  for (const auto& row : rows) {
    if (row.measure != measure) continue;
    if (parameter.has_value() != row.parameter.has_value()) continue;
    if (parameter && std::abs(*parameter - *row.parameter) > 1e-12) continue;
    return &row;
  }
  return nullptr;
}

namespace {

MeasureRow coherence_row(std::string measure, std::optional<double> parameter, double numeric,
                         std::optional<double> closed, double tol) {
  MeasureRow row;
  row.measure = std::move(measure);
  row.parameter = parameter;
  row.numeric = numeric;
  row.closed_form = closed;
  if (closed) {
    row.gap = std::abs(numeric - *closed);
    row.gated = true;
    row.pass = *row.gap <= tol;
  } else {
    row.note = "closed form not applicable: r does not divide Q";
  }
  return row;
}

}  // namespace

MeasureReport verify_stage(Stage stage, const ShorInstance& instance, const PipelineStates& states,
                           const HammingTable& table, const VerifyOptions& options) {
  if (!instance.r) throw std::domain_error("verify_stage: order r unknown");
  const u64 r = *instance.r;
  const u64 Q = instance.Q;
  const bool divisible = instance.m.has_value();

  const PureState& state =
      stage == Stage::Psi1 ? states.psi1 : (stage == Stage::Psi2 ? states.psi2 : states.psi3);
  const auto amps = state.amplitudes();
  const bool third = stage == Stage::Psi3;
  const bool closed_available = !third || divisible;

  MeasureReport report;
  report.stage = stage;
  const double tol = options.coherence_tol;

  for (double p : options.p_grid) {
    const double numeric = l1p_coherence_pure(amps, p);
    std::optional<double> closed;
    if (closed_available) {
      const AlphaParam any{2.0};
      closed = third ? thm3_closed_forms(r, p, any).c1p : thm1_closed_forms(Q, p, any).c1p;
    }
    report.rows.push_back(coherence_row("C_1p", p, numeric, closed, tol));
  }
  for (double a : options.alpha_grid) {
    const AlphaParam alpha{a};
    const double numeric = tsallis_coherence_pure(amps, alpha);
    std::optional<double> closed;
    if (closed_available)
      closed = third ? thm3_closed_forms(r, 1.0, alpha).c_alpha : thm1_closed_forms(Q, 1.0, alpha).c_alpha;
    MeasureRow row = coherence_row("C_alpha", a, numeric, closed, tol);
    if (alpha.uses_limit()) row.note = "alpha -> 1 limit (ln2 * C_r)";
    report.rows.push_back(std::move(row));
  }
  {
    const double numeric = geometric_coherence_pure(amps);
    std::optional<double> closed;
    if (closed_available)
      closed = third ? thm3_closed_forms(r, 1.0, AlphaParam{2.0}).c_g : thm1_closed_forms(Q, 1.0, AlphaParam{2.0}).c_g;
    report.rows.push_back(coherence_row("C_g", std::nullopt, numeric, closed, tol));
  }

  // Geometric entanglement: symmetric-ansatz optimum next to the closed form, never gated.
  const SymmetricOptimum opt = geometric_entanglement_symmetric(state);
  report.eg_alpha_angle = opt.alpha_angle;
  MeasureRow eg;
  eg.measure = "E_g";
  eg.numeric = opt.entanglement;
  switch (stage) {
    case Stage::Psi1:
      eg.closed_form = 0.0;
      break;
    case Stage::Psi2: {
      const Psi2ClosedForm cf = closed_form_Eg_psi2(table);
      eg.closed_form = cf.value;
      if (!cf.exact_divisibility) eg.note = "approximate: r does not divide Q";
      if (!cf.physical) eg.note = "closed form outside [0, 1]";
      break;
    }
    case Stage::Psi3:
      if (table.weights_as) {
        const Psi3ClosedForm cf = closed_form_Eg_psi3(table);
        eg.closed_form = cf.canonical();
        eg.closed_form_literal = cf.literal;
        if (!cf.physical) eg.note = "closed form outside [0, 1]";
      } else {
        eg.note = "closed form not applicable: r does not divide Q";
      }
      break;
  }
  if (eg.closed_form) eg.gap = std::abs(eg.numeric - *eg.closed_form);
  report.rows.push_back(std::move(eg));
  return report;
}

AlphaPeak find_alpha_peak(u64 r, double lo, double hi, double step) {
  if (!(lo >= 1.0 && hi <= 2.0 && lo < hi)) throw std::domain_error("find_alpha_peak: window must lie in (1, 2]");
  if (!(step > 0.0)) throw std::domain_error("find_alpha_peak: step must be positive");
  const double d = static_cast<double>(r) * static_cast<double>(r);
  AlphaPeak peak;
  peak.value = -std::numeric_limits<double>::infinity();
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
  for (long i = 1; i <= count; ++i) {
    const double a = lo + static_cast<double>(i) * step;
    const double v = tsallis_uniform(d, AlphaParam{std::min(a, 2.0)});
    if (v > peak.value) {
      peak.value = v;
      peak.alpha = a;
    }
  }
  if (r == 1) {
    peak.degenerate = true;
    peak.alpha = hi;
    peak.value = 0.0;
  }
  return peak;
}

}  // namespace shorres
