#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "mgabor/appoisson.hpp"

using namespace mgabor;

namespace {

ModelSetSpec spec_a(double half_width = 0.5) {
    ModelSetSpec spec;
    spec.scheme = scheme_a();
    spec.window.half_width = half_width;
    return spec;
}

BumpSpec bump_spec(double half_width = 0.5) {
    BumpSpec bs;
    bs.omega.half_width = half_width;
    return bs;
}

double theta(double s) {
    double acc = 0.0;
    for (int m = -20; m <= 20; ++m) acc += std::exp(-kPi * s * m * m);
    return acc;
}

}  // namespace

TEST_CASE("lattice PSF against theta sums") {
    const Gaussian2D F{1.0, 1.0};
    auto self = psf_lattice_verify(PlainLattice::separable(1.0, 1.0), F, {0.0, 0.0});
    CHECK(self.gap < 1e-15);
    CHECK(std::abs(self.lhs.real() - theta(1.0) * theta(1.0)) < 1e-14);
    CHECK(self.ok());

    auto two = psf_lattice_verify(PlainLattice::separable(2.0, 2.0), F, {0.0, 0.0});
    const double lhs_oracle = theta(4.0) * theta(4.0);
    const double rhs_oracle = 0.25 * theta(0.25) * theta(0.25);
    CHECK(std::abs(lhs_oracle - rhs_oracle) < 1e-12);
    CHECK(std::abs(two.lhs.real() - lhs_oracle) < 1e-13);
    CHECK(std::abs(two.rhs.real() - rhs_oracle) < 1e-13);
    CHECK(std::abs(two.lhs.real() - 1.000014) < 1e-6);
    CHECK(two.gap < 1e-9);

    auto shifted = psf_lattice_verify(PlainLattice::separable(1.0, 1.0), Gaussian2D{2.0, 0.7}, {0.3, 0.1});
    CHECK(shifted.gap < 1e-10);
    CHECK(shifted.ok());

    CHECK_THROWS(psf_lattice_verify(PlainLattice::separable(1.0, 1.0), Gaussian2D{1.0, 0.0}, {0.0, 0.0}));
}

TEST_CASE("model set PSF") {
    const auto spec = spec_a();
    const Bump bump(bump_spec());
    for (const PhasePoint z : {PhasePoint{0.0, 0.0}, PhasePoint{0.3, 0.1}}) {
        auto rep = psf_modelset_verify(spec, bump, Gaussian2D{1.0, 1.0}, z);
        INFO("z = " << z.x << "," << z.omega << " gap " << rep.relative_gap);
        CHECK(rep.relative_gap < 1e-6);
        CHECK(rep.tail_rhs < 1e-6);
        CHECK(rep.ok());
    }
}

TEST_CASE("bracket product primal and dual agree") {
    const auto spec = spec_a();
    const Bump bump(bump_spec());
    const auto g0 = AnalyticWindow::gaussian();
    const auto h1 = AnalyticWindow::hermite(1, 1.2, {0.1, -0.2});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 4; ++k) {
        const PhasePoint z{u(rng), u(rng)}, zt{u(rng), u(rng)};
        const auto primal = bracket_series(g0, h1, bump, spec, z);
        const auto dual = bracket_dual(g0, h1, bump, spec, z, zt);
        const cplx p = primal(zt);
        INFO("primal " << p << " dual " << dual.value);
        CHECK(std::abs(p - dual.value) < 1e-6);
        CHECK(dual.tail < 1e-6);
    }
}

TEST_CASE("Bohr means") {
    APSeries s;
    s.terms = {{{0.0, 0.0}, 1.0}, {{0.7, -0.4}, cplx(0.5, 0.25)}, {{-1.3, 0.9}, cplx(0.0, -2.0)}};
    CHECK(std::abs(bohr_mean(s, {0.7, -0.4}, 1e7) - cplx(0.5, 0.25)) < 1e-6);
    CHECK(std::abs(bohr_mean(s, {0.0, 0.0}, 16.0) - (1.0 + 0.5 * sinc(32 * 0.7) * sinc(32 * 0.4) * cplx(1.0, 0.5) -
                                                    2.0 * cplx(0, 1) * sinc(32 * 1.3) * sinc(32 * 0.9))) < 1e-14);

    auto fn = [&](const PhasePoint& z) { return s(z); };
    const std::vector<PhasePoint> freqs = {{0.0, 0.0}, {0.7, -0.4}, {-1.3, 0.9}};
    const auto sampled = bohr_means(fn, freqs, 16.0, 1.0 / 32.0, 1.5);
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const cplx exact = bohr_mean(s, freqs[k], 16.0);
        CHECK(std::abs(sampled[k] - exact) < 2e-3 * std::abs(s.terms[k].coef));
    }
    CHECK_THROWS(bohr_means(fn, freqs, 8.0, 1.0 / 32.0, 1.5));
    CHECK_THROWS(bohr_means(fn, freqs, 16.0, 0.5, 1.5));
}

TEST_CASE("N-series matches the direct weighted sum") {
    const auto spec = spec_a();
    const auto bs = bump_spec();
    auto bump = std::make_shared<const Bump>(bs);
    const auto kernel = DecayKernel::psi_hat_squared(bump);
    const auto g0 = AnalyticWindow::gaussian();
    const auto f1 = AnalyticWindow::gaussian(1.1, {0.2, 0.1});
    const auto f2 = AnalyticWindow::hermite(1, 0.9);
    WindowFamily w{{g0}, {AnalyticWindow::gaussian(1.0, {0.1, 0.0})}};
    const auto ns = n_series_modelset(spec, kernel, w, f1, f2);
    CHECK(ns.tail < 1e-9);
    CHECK_FALSE(ns.conditional);
    auto weight = [&](double v) { return bump->value(v); };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 6; ++k) {
        const PhasePoint z = k == 0 ? PhasePoint{0.0, 0.0} : PhasePoint{u(rng), u(rng)};
        const auto direct = n_direct_modelset(spec, weight, w, f1, f2, z);
        const cplx series = ns.series(z);
        INFO("direct " << direct.value << " series " << series);
        CHECK(std::abs(series - direct.value) < 1e-6 * std::max(1e-3, std::abs(direct.value)));
    }
}

TEST_CASE("lattice N-series") {
    const auto lat = PlainLattice::separable(1.0, 1.0);
    const auto g0 = AnalyticWindow::gaussian();
    const auto g1 = AnalyticWindow::hermite(1);
    WindowFamily both{{g0, g1}, {g0, g1}};
    WindowFamily first{{g0}, {g0}}, second{{g1}, {g1}};
    const auto f = AnalyticWindow::gaussian(1.3, {0.2, -0.1});
    const auto all = n_series_lattice(lat, both, f, f);
    auto sum = n_series_lattice(lat, first, f, f);
    sum.series += n_series_lattice(lat, second, f, f).series;
    const PhasePoint z{0.37, -0.21};
    const cplx v = all.series(z);
    CHECK(v.real() > 0.0);
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(v - sum.series(z)) < 1e-12);
    const auto direct = n_direct_lattice(lat, both, f, f, z);
    CHECK(std::abs(v - direct.value) < 1e-10);
}

TEST_CASE("correlations in the double series") {
    const Bump bump(bump_spec());
    CHECK(std::abs(bump_correlation(bump, 0.0, 0.0) - bump.l2_norm_squared()) < 1e-6 * bump.l2_norm_squared());
    CHECK(std::abs(bump_correlation(bump, 1.2, 0.3)) == 0.0);

    const auto f1 = AnalyticWindow::gaussian(1.0, {0.1, 0.2});
    const auto g = AnalyticWindow::hermite(1, 1.1);
    const auto f2 = AnalyticWindow::gaussian(0.9);
    const auto h = AnalyticWindow::hermite(1, 1.0, {0.0, 0.1});
    const cplx origin = ambiguity_correlation(f1, g, f2, h, {0.0, 0.0}, {0.0, 0.0});
    CHECK(std::abs(origin - inner_product(f1, f2) * std::conj(inner_product(g, h))) < 1e-9);

    // brute force over the plane
    const PhasePoint uu{0.4, -0.3}, zeta{0.25, 0.5};
    const double step = 1.0 / 16.0;
    cplx brute = 0.0;
    for (double x = -7.0; x <= 7.0; x += step)
        for (double w = -7.0; w <= 7.0; w += step) {
            const PhasePoint p{x, w};
            const PhasePoint q = p - uu;
            brute += ambiguity(f1, g, p) * std::conj(ambiguity(f2, h, q)) * cis2pi(-zeta.dot(q));
        }
    brute *= step * step;
    const cplx fast = ambiguity_correlation(f1, g, f2, h, uu, zeta);
    INFO("fast " << fast << " brute " << brute);
    CHECK(std::abs(fast - brute) < 1e-8);
}
