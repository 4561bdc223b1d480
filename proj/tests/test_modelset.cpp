#include <doctest.h>

#include <cmath>
#include <set>

#include "mgabor/modelset.hpp"

using namespace mgabor;

namespace {

ModelSetSpec spec_a(double half_width) {
    ModelSetSpec s;
    s.scheme = scheme_a();
    s.window.half_width = half_width;
    return s;
}

}  // namespace

TEST_CASE("model set enumeration basics") {
    auto spec = spec_a(0.5);
    auto small = enumerate_model_set(spec, 0.1);
    REQUIRE(small.size() == 1);
    CHECK(small.points[0].lambda.norm() == 0.0);
    CHECK(small.points[0].internal == 0.0);

    BumpSpec bs;
    bs.omega.half_width = 0.5;
    Bump bump(bs);
    auto weighted = enumerate_model_set(spec, 10.0, &bump);
    bool found_origin = false;
    for (const auto& p : weighted.points) {
        CHECK(std::abs(p.internal) <= 0.5);
        CHECK(p.weight >= 0.0);
        if (p.lambda.norm() == 0.0) {
            found_origin = true;
            CHECK(std::abs(p.weight - 2.0) < 1e-6);
        }
    }
    CHECK(found_origin);

    auto big = enumerate_model_set(spec, 50.0);
    const double expected = 1.0 / scheme_a().volume() * 100.0 * 100.0;
    CHECK(std::abs(static_cast<double>(big.size()) - expected) / expected < 0.05);
}

TEST_CASE("enumeration matches brute force over lattice coordinates") {
    auto spec = spec_a(0.7);
    auto pts = enumerate_model_set(spec, 6.0);
    std::set<std::vector<std::int64_t>> got;
    for (const auto& p : pts.points) got.insert(p.coords);
    std::set<std::vector<std::int64_t>> want;
    const auto scheme = scheme_a();
    const auto& A = scheme.basis();
    for (int i = -30; i <= 30; ++i)
        for (int j = -30; j <= 30; ++j)
            for (int k = -30; k <= 30; ++k) {
                const Eigen::Vector3d e = A * Eigen::Vector3d(i, j, k);
                if (std::abs(e[0]) <= 6.0 && std::abs(e[1]) <= 6.0 && std::abs(e[2]) <= 0.7) want.insert({i, j, k});
            }
    CHECK(got == want);
}

TEST_CASE("shifted model set equals translate of the window-shifted set") {
    auto spec = spec_a(0.5);
    const Eigen::Vector2d s(0.37, -1.2);
    const double t = 0.21;
    spec.shift = ModelSetShift{s, t};
    auto shifted = enumerate_model_set(spec, 8.0);
    auto wide = enumerate_model_set(spec_a(1.0), 12.0);
    std::vector<Eigen::VectorXd> expected;
    for (const auto& p : wide.points) {
        const Eigen::VectorXd lam = p.lambda + s;
        if (std::abs(p.internal + t) <= 0.5 && (lam - s).cwiseAbs().maxCoeff() <= 8.0) expected.push_back(lam);
    }
    REQUIRE(expected.size() == shifted.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK((expected[i] - shifted.points[i].lambda).norm() < 1e-12);
}

TEST_CASE("density estimates") {
    auto d1 = density_estimate(spec_a(0.5), 100.0);
    CHECK(std::abs(d1.theoretical - 0.148261) < 1e-5);
    CHECK(d1.relative_gap < 0.02);
    auto d8 = density_estimate(spec_a(4.0), 100.0);
    CHECK(std::abs(d8.theoretical - 1.18609) < 1e-4);
    CHECK(d8.relative_gap < 0.02);
    const double g25 = density_estimate(spec_a(0.5), 25.0).relative_gap;
    const double g50 = density_estimate(spec_a(0.5), 50.0).relative_gap;
    const double g100 = d1.relative_gap;
    CHECK(g50 < g25);
    CHECK(g100 < g50);
}

TEST_CASE("relative separation") {
    CHECK(relative_separation(std::vector<Eigen::VectorXd>{Eigen::Vector2d(0.3, 0.4)}) == 1.0);
    CHECK(relative_separation(std::vector<Eigen::VectorXd>{}) == 0.0);
    std::vector<Eigen::VectorXd> z2;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j)
            if (i * i + j * j <= 9) z2.push_back(Eigen::Vector2d(i, j));
    const double r = relative_separation(z2);
    CHECK(r >= 1.0);
    CHECK(r <= 5.0);
    const double r30 = relative_separation(enumerate_model_set(spec_a(0.5), 30.0));
    const double r60 = relative_separation(enumerate_model_set(spec_a(0.5), 60.0));
    CHECK(r30 == r60);
    CHECK(lattice_relative_separation(LatticeBasis(Eigen::Matrix3d::Identity())) >= 7.0);
}

TEST_CASE("genericity margin") {
    Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
    B(2, 2) = 0.5;
    ModelSetSpec rational;
    rational.scheme = CutProjectScheme(1, B);
    rational.window.half_width = 0.5;
    CHECK(genericity_margin(rational, 3.0) == 0.0);
    const double m20 = genericity_margin(spec_a(0.5), 20.0);
    const double m50 = genericity_margin(spec_a(0.5), 50.0);
    CHECK(m50 > 0.0);
    CHECK(m50 <= m20);
}

TEST_CASE("eps-dual model sets") {
    auto spec = spec_a(0.5);
    BumpSpec bs;
    bs.omega.half_width = 0.5;
    bs.n = 3;
    auto phi3 = DecayKernel::phi_n(bs);
    auto ed = eps_dual_model_set(spec, phi3, 1e-3, 1.0, 1, 5.0);
    CHECK(ed.T > 0.0);
    CHECK(std::isfinite(ed.T));
    CHECK(ed.tail < ed.threshold);
    for (const auto& p : ed.points.points) CHECK(std::abs(p.internal) <= ed.T);

    CHECK_THROWS_WITH_AS(eps_dual_model_set(spec, DecayKernel::phi_limit(spec.window), 1e-6, 1.0, 1, 5.0),
                         "non-summable kernel tail", Error);

    auto huge = eps_dual_model_set(spec, phi3, 1e9, 1.0, 1, 5.0);
    CHECK(huge.T == 0.0);
    REQUIRE(huge.points.size() == 1);
    CHECK(huge.points.points[0].lambda.norm() == 0.0);
}
