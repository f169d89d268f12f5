#pragma once

// JSON serialization of measure reports, variation ledgers and gamma factors.
// Reports are keyed by stage, then by measure; each leaf carries
// {numeric, closed_form, gap, pass}.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shorres/entanglement.hpp"
#include "shorres/theorems.hpp"

namespace shorres {

/// "C_1p[p=1.5]", "C_alpha[alpha=0.3]", "C_g" or "E_g".
std::string measure_key(const MeasureRow& row);

nlohmann::json to_json(const MeasureRow& row);
nlohmann::json to_json(const MeasureReport& report);

/// {"psi1": {...}, "psi2": {...}, "psi3": {...}} in stage order.
nlohmann::json reports_to_json(const std::vector<MeasureReport>& reports);

nlohmann::json to_json(const VariationLedger& ledger);
nlohmann::json to_json(const GammaReport& gamma);

std::string_view relation_name(GammaRelation relation);

}  // namespace shorres
