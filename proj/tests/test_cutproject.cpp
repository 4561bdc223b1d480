#include <cmath>

#include "doctest.h"
#include "mgabor/cutproject.hpp"

using namespace mgabor;

TEST_CASE("enumerate identity basis in a cube") {
    CutProjectScheme s(1, Eigen::MatrixXd::Identity(3, 3));
    CHECK(s.enumerate_in_box(Box::cube(3, 1.5)).size() == 27);
}

TEST_CASE("tiny box contains only the origin") {
    const auto pts = scheme_a().enumerate_in_box(Box::cube(3, 1e-6));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].coords == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("scheme A box count agrees with brute force scan") {
    const auto s = scheme_a();
    const auto pts = s.enumerate_in_box(Box::cube(3, 10.0));
    std::size_t brute = 0;
    const auto& A = s.basis();
    for (int i = -40; i <= 40; ++i)
        for (int j = -40; j <= 40; ++j)
            for (int k = -40; k <= 40; ++k) {
                const Eigen::Vector3d x = A * Eigen::Vector3d(i, j, k);
                if (std::abs(x[0]) <= 10 && std::abs(x[1]) <= 10 && std::abs(x[2]) <= 10) ++brute;
            }
    CHECK(pts.size() == brute);
    CHECK(brute > 100);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].coords < pts[i].coords);
}

TEST_CASE("box translation by a lattice vector preserves counts") {
    const auto s = scheme_a();
    const Eigen::Vector3d g = s.basis() * Eigen::Vector3d(2, -1, 1);
    Box b = Box::cube(3, 4.0);
    Box shifted = b;
    for (int i = 0; i < 3; ++i) {
        shifted.lo[i] += g[i];
        shifted.hi[i] += g[i];
    }
    CHECK(s.enumerate_in_box(b).size() == s.enumerate_in_box(shifted).size());
}

TEST_CASE("dual schemes and volumes") {
    const auto p = PlainLattice::separable(0.5, 0.5);
    CHECK(p.dual().basis().isApprox(Eigen::Matrix2d::Identity() * 2.0, 1e-14));
    const auto s = scheme_a();
    const auto dd = dual_scheme(dual_scheme(s));
    CHECK((dd.basis() - s.basis()).cwiseAbs().maxCoeff() < 1e-12);
    const double det = std::abs(1.0 - std::sqrt(21.0) - std::sqrt(10.0));
    CHECK(s.volume() == doctest::Approx(det).epsilon(1e-12));
    CHECK(s.volume() == doctest::Approx(6.74486).epsilon(1e-6));
    CHECK(dual_scheme(s).volume() == doctest::Approx(0.14826).epsilon(1e-4));
    CHECK(s.volume() * dual_scheme(s).volume() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("adjoint lattice of a separable lattice") {
    const auto adj = PlainLattice::separable(0.5, 0.25).adjoint();
    // J * diag(2, 4) = ((0, 4), (-2, 0))
    CHECK(adj.basis()(0, 1) == doctest::Approx(4.0));
    CHECK(adj.basis()(1, 0) == doctest::Approx(-2.0));
    CHECK(adj.volume() == doctest::Approx(8.0));
}

TEST_CASE("projections") {
    const auto s = scheme_a();
    LatticePoint p{{1, 0, 0}, s.lattice().embed({1, 0, 0})};
    CHECK(project(s, p, Projection::physical)[0] == doctest::Approx(1.0));
    CHECK(project(s, p, Projection::physical)[1] == doctest::Approx(0.0));
    CHECK(project(s, p, Projection::internal)[0] == doctest::Approx(std::sqrt(5.0)));
    LatticePoint q{{0, 0, 1}, s.lattice().embed({0, 0, 1})};
    CHECK(project(s, q, Projection::physical)[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(project(s, q, Projection::physical)[1] == doctest::Approx(std::sqrt(3.0)));
    CHECK(project(s, q, Projection::internal)[0] == doctest::Approx(1.0));

    const auto lat = PlainLattice::separable(1.0, 1.0);
    LatticePoint r{{1, 1}, lat.lattice().embed({1, 1})};
    CHECK_THROWS_WITH(project(lat, r, Projection::internal), "no internal space");
}

TEST_CASE("singular basis is rejected") {
    Eigen::MatrixXd b(3, 3);
    b << 1, 2, 3, 2, 4, 6, 0, 0, 1;
    CHECK_THROWS_WITH(CutProjectScheme(1, b), "singular basis");
}

TEST_CASE("scheme diagnostics") {
    const auto s = scheme_a();
    const auto d20 = scheme_diagnostics(s, 20.0, 1e-9);
    CHECK(d20.integrality_deviation < 1e-9);
    CHECK(d20.injectivity_pass);
    const auto d50 = scheme_diagnostics(s, 50.0, 1e-9);
    CHECK(d50.internal_covering_radius < d20.internal_covering_radius);

    Eigen::MatrixXd b(3, 3);
    b << 1, 0, 1, 0, 1, 0, 0, 0, std::sqrt(2.0);
    const auto bad = scheme_diagnostics(CutProjectScheme(1, b), 5.0, 1e-9);
    CHECK(bad.injectivity_min_distance == doctest::Approx(0.0));
    CHECK_FALSE(bad.pass);
}
