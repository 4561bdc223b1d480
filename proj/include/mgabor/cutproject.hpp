#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "mgabor/common.hpp"

namespace mgabor {

/// Closed axis-aligned box in R^n.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box centered(const std::vector<double>& center, const std::vector<double>& half_widths);
    static Box cube(std::size_t dim, double half_width);
};

struct LatticePoint {
    std::vector<std::int64_t> coords;
    Eigen::VectorXd embedded;
};

/// Visitor receives integer coordinates and the embedded point (both of length dim()).
using LatticeVisitor = std::function<void(const std::int64_t* coords, const double* embedded)>;

/// Full-rank lattice A * Z^n with cached inverse.
class LatticeBasis {
public:
    LatticeBasis() = default;
    explicit LatticeBasis(Eigen::MatrixXd basis);

    int dim() const { return static_cast<int>(basis_.rows()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    const Eigen::MatrixXd& inverse() const { return inverse_; }
    double volume() const { return volume_; }

    /// Basis of the dual lattice, the inverse transpose.
    LatticeBasis dual() const;
    Eigen::VectorXd embed(const std::vector<std::int64_t>& coords) const;

    /// Visits every lattice point inside the closed box, lexicographically by coordinates.
    void for_each_in_box(const Box& box, const LatticeVisitor& visit) const;
    std::vector<LatticePoint> enumerate_in_box(const Box& box) const;

private:
    Eigen::MatrixXd basis_;
    Eigen::MatrixXd inverse_;
    double volume_ = 0.0;
};

/// Lattice Gamma in R^{2d} x R with physical projection p1 and internal projection p2.
class CutProjectScheme {
public:
    CutProjectScheme() = default;
    CutProjectScheme(int d, Eigen::MatrixXd basis);

    int d() const { return d_; }
    int dim() const { return 2 * d_ + 1; }
    const LatticeBasis& lattice() const { return lattice_; }
    const Eigen::MatrixXd& basis() const { return lattice_.basis(); }
    double volume() const { return lattice_.volume(); }

    std::vector<LatticePoint> enumerate_in_box(const Box& box) const { return lattice_.enumerate_in_box(box); }
    void for_each_in_box(const Box& box, const LatticeVisitor& visit) const { lattice_.for_each_in_box(box, visit); }

private:
    int d_ = 1;
    LatticeBasis lattice_;
};

/// Lattice in R^{2d} without internal space.
class PlainLattice {
public:
    PlainLattice() = default;
    explicit PlainLattice(Eigen::MatrixXd basis);

    static PlainLattice separable(double a, double b);

    int d() const { return lattice_.dim() / 2; }
    const LatticeBasis& lattice() const { return lattice_; }
    const Eigen::MatrixXd& basis() const { return lattice_.basis(); }
    Eigen::MatrixXd dual_basis() const { return lattice_.inverse().transpose(); }
    double volume() const { return lattice_.volume(); }

    PlainLattice dual() const;
    /// Adjoint lattice J * Lambda^*.
    PlainLattice adjoint() const;

    std::vector<LatticePoint> enumerate_in_box(const Box& box) const { return lattice_.enumerate_in_box(box); }
    void for_each_in_box(const Box& box, const LatticeVisitor& visit) const { lattice_.for_each_in_box(box, visit); }

private:
    LatticeBasis lattice_;
};

CutProjectScheme dual_scheme(const CutProjectScheme& scheme);

enum class Projection { physical, internal };

Eigen::VectorXd project(const CutProjectScheme& scheme, const LatticePoint& point, Projection which);
/// Plain lattices have no internal space; asking for it throws.
Eigen::VectorXd project(const PlainLattice& lattice, const LatticePoint& point, Projection which);

/// The 2d x 2d symplectic matrix ((0, I), (-I, 0)).
Eigen::MatrixXd symplectic_J(int d);

struct SchemeDiagnostics {
    std::size_t points = 0;
    double injectivity_min_distance = 0.0;
    bool injectivity_pass = false;
    double internal_covering_radius = 1.0;
    double integrality_deviation = 0.0;
    bool integrality_pass = false;
    bool pass = false;
};

SchemeDiagnostics scheme_diagnostics(const CutProjectScheme& scheme, double radius, double tol);

/// SCHEME-A fixture: basis rows (1,0,sqrt2), (0,1,sqrt3), (sqrt5,sqrt7,1).
CutProjectScheme scheme_a();

}  // namespace mgabor
