#pragma once

#include "gradest/conditions.hpp"
#include "gradest/families.hpp"
#include "gradest/verifier.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace gradest {

nlohmann::ordered_json to_json(const GradientBound& bound);
nlohmann::ordered_json to_json(const ConditionReport& report);
/// Summary without the per-point samples (see verification_csv).
nlohmann::ordered_json to_json(const VerificationReport& report);
nlohmann::ordered_json to_json(const AsymptoticLimits& limits);

/// Columns: t, beta, psi, alpha, phi.
std::string samples_csv(const std::vector<BoundSample>& samples);
/// Columns: r, t, G.
std::string verification_csv(const VerificationReport& report);
/// Columns: t, margin, center_margin.
std::string margin_csv(const VerificationReport& report);
/// Columns: t, one psi column per bound id, then the dominant id.
std::string comparison_csv(const ComparisonTable& table);

}  // namespace gradest
