#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "mgabor/bump.hpp"
#include "mgabor/cutproject.hpp"

namespace mgabor {

/// Shift (s, t) producing s + Lambda(Omega - t).
struct ModelSetShift {
    Eigen::VectorXd s;
    double t = 0.0;
};

struct ModelSetSpec {
    CutProjectScheme scheme;
    WindowInterval window;
    std::optional<ModelSetShift> shift;

    int d() const { return scheme.d(); }
    Eigen::VectorXd physical_shift() const;
    double internal_shift() const { return shift ? shift->t : 0.0; }
};

struct WeightedPoint {
    Eigen::VectorXd lambda;
    /// p2(gamma) + t, the coordinate compared against the window.
    double internal = 0.0;
    double weight = 1.0;
    std::vector<std::int64_t> coords;
};

struct WeightedPointSet {
    int d = 1;
    std::vector<WeightedPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Points with |lambda - s|_inf <= radius and internal coordinate in the closed window, lexicographic in coords.
WeightedPointSet enumerate_model_set(const ModelSetSpec& spec, double radius, const Bump* weight = nullptr);

struct DensityEstimate {
    double estimate = 0.0;
    double theoretical = 0.0;
    double relative_gap = 0.0;
    std::size_t count = 0;
};

/// Count in the Euclidean ball of the given radius (centered at s) divided by the ball volume.
DensityEstimate density_estimate(const ModelSetSpec& spec, double radius);

double ball_volume(int dim, double radius);

/// Upper-bound estimate of sup_x #(points in B(x,1)) using grid centers of spacing `spacing`.
double relative_separation(const std::vector<Eigen::VectorXd>& points, double spacing = 0.0);
double relative_separation(const WeightedPointSet& points, double spacing = 0.0);

/// rel of the full dual lattice Gamma^* in R^{2d+1}.
double lattice_relative_separation(const LatticeBasis& lattice, double spacing = 0.0);

/// Distance from the window boundary over points whose internal value lies within 0.1 of the window.
double genericity_margin(const ModelSetSpec& spec, double radius);

struct EpsDualModelSet {
    double T = 0.0;
    double threshold = 0.0;
    double tail = 0.0;
    double density = 0.0;
    double rel_dual = 0.0;
    /// beta = p1^*(eta) with weight kernel(-p2^*(eta)); `internal` holds p2^*(eta).
    WeightedPointSet points;
};

EpsDualModelSet eps_dual_model_set(const ModelSetSpec& spec, const DecayKernel& kernel, double eps, double C, int M,
                                   double radius);

}  // namespace mgabor
