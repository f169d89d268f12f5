#include "shorres/report.hpp"

#include <cstdio>

namespace shorres {

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

nlohmann::json delta_json(const std::optional<EntanglementDelta>& d) {
  if (!d) return nullptr;
  return {{"literal", d->literal}, {"modulus_squared", d->modulus_squared}, {"canonical", d->canonical()}};
}

}  // namespace

std::string measure_key(const MeasureRow& row) {
  if (!row.parameter) return row.measure;
  const char* name = row.measure == "C_1p" ? "p" : "alpha";
  return row.measure + "[" + name + "=" + short_number(*row.parameter) + "]";
}

nlohmann::json to_json(const MeasureRow& row) {
  nlohmann::json leaf = {
      {"numeric", row.numeric},
      {"closed_form", optional_number(row.closed_form)},
      {"gap", optional_number(row.gap)},
      {"gated", row.gated},
      {"pass", row.gated ? nlohmann::json(row.pass) : nlohmann::json(nullptr)},
  };
  if (row.closed_form_literal) {
    leaf["closed_form_literal"] = *row.closed_form_literal;
    leaf["closed_form_modulus_squared"] = optional_number(row.closed_form);
  }
  if (!row.note.empty()) leaf["note"] = row.note;
  return leaf;
}

nlohmann::json to_json(const MeasureReport& report) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& row : report.rows) out[measure_key(row)] = to_json(row);
  if (report.eg_alpha_angle && out.contains("E_g")) out["E_g"]["alpha_angle"] = *report.eg_alpha_angle;
  return out;
}

nlohmann::json reports_to_json(const std::vector<MeasureReport>& reports) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& r : reports) out[std::string(stage_name(r.stage))] = to_json(r);
  return out;
}

nlohmann::json to_json(const VariationLedger& ledger) {
  const OperatorVariations& op = ledger.per_operator;
  const AlgorithmVariations& w = ledger.whole;
  const SignLedger& s = ledger.signs;
  nlohmann::json j;
  j["Q"] = ledger.Q;
  j["r"] = ledger.r;
  j["p"] = ledger.p;
  j["alpha"] = ledger.alpha;
  j["per_operator"] = {
      {"U", {{"C_1p", op.c1p_U}, {"C_alpha", op.c_alpha_U}, {"C_g", op.c_g_U},
             {"E_g", optional_number(op.e_g_U)}, {"E_g_approximate", op.e_g_U_approximate}}},
      {"F_dagger", {{"C_1p", op.c1p_F}, {"C_alpha", op.c_alpha_F}, {"C_g", op.c_g_F},
                    {"E_g", delta_json(op.e_g_F)}}},
  };
  j["whole_algorithm"] = {{"C_1p", w.c1p}, {"C_alpha", w.c_alpha}, {"C_g", w.c_g}, {"E_g", delta_json(w.e_g)}};
  j["signs"] = {
      {"Q_ge_r_squared", s.register_covers_order_squared},
      {"C_1p_depleted", s.c1p_depleted},
      {"C_alpha_depleted", s.c_alpha_depleted},
      {"C_g_depleted", s.c_g_depleted},
      {"E_g_U_nonnegative", s.e_g_U_nonnegative ? nlohmann::json(*s.e_g_U_nonnegative) : nlohmann::json(nullptr)},
      {"E_g_F_dagger_value", optional_number(s.e_g_F_value)},
      {"expected_signs_hold", s.expected_signs_hold()},
  };
  j["additivity_residual"] = ledger.additivity_residual;
  return j;
}

std::string_view relation_name(GammaRelation relation) {
  switch (relation) {
    case GammaRelation::CoherenceExceeds: return "C_g > E_g";
    case GammaRelation::Equal: return "C_g = E_g";
    case GammaRelation::EntanglementExceeds: return "C_g < E_g";
  }
  return "unknown";
}

nlohmann::json to_json(const GammaReport& gamma) {
  return {
      {"gamma", gamma.gamma},
      {"upper_bound", gamma.upper_bound},
      {"within_bounds", gamma.within_bounds},
      {"degenerate", gamma.degenerate},
      {"relation", relation_name(gamma.relation)},
      {"identity_residual", gamma.degenerate ? nlohmann::json(nullptr) : nlohmann::json(gamma.identity_residual)},
  };
}

}  // namespace shorres
