#include "mgabor/report.hpp"

#include <algorithm>
#include <cmath>

namespace mgabor {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::report_only: return "report-only";
    }
    return "?";
}

void Report::set_sides(cplx l, cplx r) {
    lhs = l;
    rhs = r;
    gap = std::abs(l - r);
    const double scale = std::max(std::abs(l), std::abs(r));
    relative_gap = scale > 0.0 ? gap / scale : gap;
}

void Report::decide(double tolerance, bool relative_tol) {
    tol = tolerance;
    relative = relative_tol;
    const double scale = relative_tol ? std::max(std::abs(lhs), std::abs(rhs)) : 1.0;
    const double budget = tail_lhs + tail_rhs + tolerance * scale;
    verdict = gap <= budget ? Verdict::pass : Verdict::fail;
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

namespace {

nlohmann::json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? nlohmann::json("nan") : nlohmann::json(v > 0 ? "inf" : "-inf");
}

}  // namespace

nlohmann::json to_json(const Report& r, bool include_runtime) {
    nlohmann::json j;
    j["check"] = r.check;
    j["params"] = r.params;
    j["lhs"] = complex_json(r.lhs);
    j["rhs"] = complex_json(r.rhs);
    j["gap"] = finite_or_string(r.gap);
    j["relative_gap"] = finite_or_string(r.relative_gap);
    j["tails"] = nlohmann::json::array({finite_or_string(r.tail_lhs), finite_or_string(r.tail_rhs)});
    j["tol"] = r.tol;
    j["tol_relative"] = r.relative;
    j["verdict"] = to_string(r.verdict);
    if (!r.details.empty()) j["details"] = r.details;
    if (include_runtime) j["runtime_ms"] = r.runtime_ms;
    j["seed"] = r.seed;
    return j;
}

}  // namespace mgabor
