#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mgabor/cutproject.hpp"
#include "mgabor/modelset.hpp"
#include "mgabor/tf.hpp"

namespace mgabor {

struct Node {
    PhasePoint lambda;
    double weight = 1.0;
    double internal = 0.0;
};

std::vector<Node> nodes_from(const WeightedPointSet& points);
/// Lattice nodes in the box |x| <= time_radius, |omega| <= freq_radius.
std::vector<Node> nodes_from(const PlainLattice& lattice, double time_radius, double freq_radius);
/// Separable lattice a Z x b Z with time indices in [m0, m1) and frequency indices in [k0, k1).
std::vector<Node> separable_nodes(double a, double b, long m0, long m1, long k0, long k1);

/// Gabor system {w(lambda) pi(lambda) g_i}.
struct GaborSystem {
    std::vector<Signal> windows;
    std::vector<Node> nodes;
};

struct TruncationPolicy {
    double node_radius = std::numeric_limits<double>::infinity();
    double tail_tol = std::numeric_limits<double>::infinity();
    bool report_tails = true;
};

/// Uniform output grid t_j = start + j*step.
struct GridSpec {
    double start = 0.0;
    double step = 1.0;
    std::size_t size = 0;

    static GridSpec of(const SampledSignal& s) { return {s.start, s.step, s.size()}; }
    double t(std::size_t j) const { return start + step * static_cast<double>(j); }
};

struct Coefficient {
    std::size_t node = 0;
    int window = 0;
    PhasePoint lambda;
    cplx value{0.0, 0.0};
};

struct AnalysisResult {
    std::vector<Coefficient> coefficients;
    double tail = 0.0;
};

struct FrameResult {
    SampledSignal value;
    double tail = 0.0;
    /// Largest grid rounding applied to a sampled window shift.
    double rounding = 0.0;
};

/// <f, pi(lambda) g_i> times w(lambda) for every node within the policy radius.
AnalysisResult analysis(const GaborSystem& system, const Signal& f, const TruncationPolicy& policy = {});

/// S f = sum_i sum_lambda w^2 <f, pi(lambda) g_i> pi(lambda) h_i sampled on `grid` (h = g without duals).
FrameResult frame_apply(const GaborSystem& system, const std::vector<Signal>* dual_windows, const Signal& f,
                        const GridSpec& grid, const TruncationPolicy& policy = {});
FrameResult frame_apply(const GaborSystem& system, const std::vector<Signal>* dual_windows, const SampledSignal& f,
                        const TruncationPolicy& policy = {});

/// max_t |S^Lambda pi(z) f - pi(z) S^{Lambda - z} f| / ||f||_inf on the grid, node sets matched through the shift.
double covariance_residual(const GaborSystem& system, const std::vector<Signal>* dual_windows, const PhasePoint& z,
                           const AnalyticWindow& f, const GridSpec& grid, const TruncationPolicy& policy = {});

struct FrameBounds {
    double A = 0.0;
    double B = 0.0;
    double residual_A = 0.0;
    double residual_B = 0.0;
    int iterations_A = 0;
    int iterations_B = 0;
    bool converged = false;
};

/// Extremal Rayleigh quotients of the frame operator discretized on `grid` (estimates, not certificates).
FrameBounds frame_bounds_estimate(const GaborSystem& system, const GridSpec& grid, const TruncationPolicy& policy,
                                  std::uint64_t seed, int block = 32, int max_iterations = 300, double tol = 1e-8);

}  // namespace mgabor
