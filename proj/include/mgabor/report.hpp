#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mgabor/common.hpp"

namespace mgabor {

enum class Verdict { pass, fail, report_only };

const char* to_string(Verdict v);

/// Both sides of a checked identity with truncation metadata.
struct Report {
    std::string check;
    nlohmann::json params = nlohmann::json::object();
    cplx lhs{0.0, 0.0};
    cplx rhs{0.0, 0.0};
    double gap = 0.0;
    double relative_gap = 0.0;
    double tail_lhs = 0.0;
    double tail_rhs = 0.0;
    double tol = 0.0;
    bool relative = false;
    Verdict verdict = Verdict::report_only;
    nlohmann::json details = nlohmann::json::object();
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;

    /// Sets gap fields from lhs/rhs.
    void set_sides(cplx l, cplx r);
    /// pass iff gap <= tails + tol (tol scaled by max(|lhs|,|rhs|) when relative).
    void decide(double tolerance, bool relative_tol);
    void report_only() { verdict = Verdict::report_only; }
    bool ok() const { return verdict != Verdict::fail; }
};

nlohmann::json to_json(const Report& r, bool include_runtime = true);
nlohmann::json complex_json(cplx z);

}  // namespace mgabor
