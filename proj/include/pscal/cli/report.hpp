#pragma once

#include <filesystem>

#include <json.hpp>

#include "pscal/feasibility/certificates.hpp"
#include "pscal/solver/minimize.hpp"
#include "pscal/verification/verify.hpp"

namespace pscal::cli {

nlohmann::json to_json(const feasibility::Certificate& cert);
nlohmann::json to_json(const verification::VerificationReport& rep);
/// Run summary of a solution (no per-node arrays).
nlohmann::json to_json(const solver::Solution& sol);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace pscal::cli
