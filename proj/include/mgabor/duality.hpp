#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "mgabor/appoisson.hpp"
#include "mgabor/gabor.hpp"

namespace mgabor {

struct ModelSetDomain {
    ModelSetSpec spec;
    DecayKernel kernel;
};

using Domain = std::variant<PlainLattice, ModelSetDomain>;

struct DualityPolicy {
    /// Primal node radius (0: automatic).
    double primal_radius = 0.0;
    /// Physical radius of the dual set (0: automatic).
    double dual_radius = 0.0;
    /// Internal cutoff of the dual scheme (0: automatic; required for phi_limit).
    double T = 0.0;
    double tail_target = 1e-10;
    /// Tolerance override (0: the identity's default).
    double tol = 0.0;
    /// Explicit primal nodes, used instead of an enumeration when given.
    std::optional<std::vector<Node>> nodes;
};

struct ResidualEntry {
    PhasePoint node;
    double internal = 0.0;
    bool origin = false;
    cplx value{0.0, 0.0};
    /// value - delta at the origin
    cplx residual{0.0, 0.0};
};

struct DualityReport {
    Report report;
    std::vector<ResidualEntry> table;
    double sup_residual = 0.0;
};

nlohmann::json to_json(const DualityReport& r, bool include_runtime = true, std::size_t max_rows = 64);

/// Primal weight paired with a kernel: psi_n, |Omega| psi_n or 1_Omega.
double direct_weight(const DecayKernel& kernel, double internal);

/// Density D of the domain: 1/vol for lattices, |Omega|/vol for model sets.
double domain_density(const Domain& domain);

DualityReport figa_check(const Domain& domain, const WindowFamily& w, const AnalyticWindow& f1,
                         const AnalyticWindow& f2, const DualityPolicy& policy = {});

struct JanssenResult {
    SampledSignal value;
    SampledSignal direct;
    DualityReport report;
};

/// Applies the dual-side operator to f on `grid` and compares with the direct mixed frame operator.
JanssenResult janssen_apply(const Domain& domain, const std::vector<Signal>& g, const std::vector<Signal>& h,
                            const Signal& f, const GridSpec& grid, const DualityPolicy& policy = {});

DualityReport wexler_raz_residuals(const Domain& domain, const std::vector<Signal>& g, const std::vector<Signal>& h,
                                   const DualityPolicy& policy = {});

DualityReport weighted_tight_residuals(const ModelSetSpec& spec, std::shared_ptr<const Bump> bump,
                                       const std::vector<AnalyticWindow>& g, const DualityPolicy& policy = {});
DualityReport weighted_dual_residuals(const ModelSetSpec& spec, std::shared_ptr<const Bump> bump,
                                      const std::vector<AnalyticWindow>& g, const std::vector<AnalyticWindow>& h,
                                      const DualityPolicy& policy = {});

struct DensityDiagnostic {
    double density = 0.0;
    cplx inner_hg{0.0, 0.0};
    /// sum w^2 <h, pi(lambda) g> <pi(lambda) h, g>
    cplx frame_sum{0.0, 0.0};
    /// sum w^2 |<h, pi(lambda) g>|^2
    double abs_sum = 0.0;
    double bessel_bound = 0.0;
    double wr_origin = 0.0;
    double wr_offorigin_max = 0.0;
    /// Smallest sup Wexler-Raz residual reachable by rescaling h.
    double wr_floor = 0.0;
    bool consistent = false;
    Report report;
};

DensityDiagnostic density_diagnostic(const Domain& domain, const Signal& g, const Signal& h, double upper_bound,
                                     const DualityPolicy& policy = {});

struct PainlessDual {
    SampledSignal h;
    double symbol_min = 0.0;
    double symbol_max = 0.0;
};

/// h = g / G with G(t) = b^{-1} sum_k |g(t - a k)|^2 on the grid of g.
PainlessDual painless_dual(double a, double b, const SampledSignal& g);

}  // namespace mgabor
