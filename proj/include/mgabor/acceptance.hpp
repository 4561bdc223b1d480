#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgabor/report.hpp"

namespace mgabor {

struct AcceptanceResult {
    std::string id;
    std::string title;
    Verdict verdict = Verdict::fail;
    /// Headline measurement compared against `tol`.
    double measured = 0.0;
    double tol = 0.0;
    double runtime_ms = 0.0;
    /// Runtime ceiling in milliseconds (0: none).
    double runtime_limit_ms = 0.0;
    nlohmann::json details = nlohmann::json::object();
    std::string error;
};

/// Runs the acceptance criteria; `only` restricts to the listed ids (e.g. "AC-3").
std::vector<AcceptanceResult> run_acceptance(std::uint64_t seed = 1, const std::vector<std::string>& only = {});

nlohmann::json to_json(const AcceptanceResult& r, bool include_runtime = true);

/// One line per result: "PASS AC-1 ..." or "FAIL AC-1 ...".
std::string summary_line(const AcceptanceResult& r);

}  // namespace mgabor
