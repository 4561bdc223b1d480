#include <doctest.h>

#include <cmath>
#include <random>

#include "mgabor/gabor.hpp"

using namespace mgabor;

namespace {

SampledSignal bump_window(double step) {
    BumpSpec bs;
    bs.omega.half_width = 1.0;
    Bump bump(bs);
    const auto n = static_cast<std::size_t>(std::llround(2.0 / step)) + 1;
    SampledSignal g = SampledSignal::zeros(-1.0, step, n);
    for (std::size_t j = 0; j < n; ++j) g.samples[j] = bump.value(g.t(j));
    return g;
}

SampledSignal random_signal(const GridSpec& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    SampledSignal f = SampledSignal::zeros(grid.start, grid.step, grid.size);
    for (auto& s : f.samples) s = cplx(nd(rng), nd(rng));
    return f;
}

cplx grid_inner(const SampledSignal& a, const SampledSignal& b) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += a.samples[j] * std::conj(b.samples[j]);
    return acc * a.step;
}

/// painless system a = b = 1/2 on a grid with step 1/32
GaborSystem painless_system(const SampledSignal& g) {
    GaborSystem sys;
    sys.windows = {g};
    sys.nodes = separable_nodes(0.5, 0.5, -8, 9, -32, 32);
    return sys;
}

}  // namespace

TEST_CASE("trivial frame operators") {
    GaborSystem sys;
    sys.windows = {AnalyticWindow::gaussian()};
    const GridSpec grid{-4.0, 1.0 / 16.0, 128};
    auto empty = frame_apply(sys, nullptr, Signal{AnalyticWindow::gaussian()}, grid);
    for (const auto& s : empty.value.samples) CHECK(s == cplx(0.0, 0.0));
    sys.nodes = {Node{{0.0, 0.0}, 1.0, 0.0}};
    auto one = frame_apply(sys, nullptr, Signal{AnalyticWindow::gaussian()}, grid);
    const auto g0 = AnalyticWindow::gaussian();
    for (std::size_t j = 0; j < grid.size; ++j) CHECK(std::abs(one.value.samples[j] - g0(grid.t(j))) < 1e-14);
}

TEST_CASE("analysis coefficients on Z^2 with a Gaussian") {
    GaborSystem sys;
    sys.windows = {AnalyticWindow::gaussian()};
    sys.nodes = nodes_from(PlainLattice::separable(1.0, 1.0), 4.0, 4.0);
    auto res = analysis(sys, AnalyticWindow::gaussian());
    double l2 = 0.0;
    for (const auto& c : res.coefficients) {
        const double r2 = c.lambda.x * c.lambda.x + c.lambda.omega * c.lambda.omega;
        if (r2 == 0.0) CHECK(std::abs(c.value - 1.0) < 1e-14);
        CHECK(std::abs(c.value) <= std::exp(-kPi * r2 / 4.0) + 1e-15);
        l2 += std::norm(c.value);
    }
    // sum_lambda e^{-pi |lambda|^2} = theta(1)^2
    double theta = 0.0;
    for (int m = -20; m <= 20; ++m) theta += std::exp(-kPi * m * m);
    CHECK(std::abs(l2 - theta * theta) < 1e-10);
    CHECK(res.tail < 1e-5);
    TruncationPolicy strict;
    strict.tail_tol = 1e-30;
    CHECK_THROWS_AS(analysis(sys, AnalyticWindow::gaussian(), strict), Error);
}

TEST_CASE("painless frame operator is multiplication by the symbol") {
    const double step = 1.0 / 32.0;
    const auto g = bump_window(step);
    auto sys = painless_system(g);
    const GridSpec grid{-3.0, step, 192};
    const auto f = random_signal(grid, 1);
    const auto Sf = frame_apply(sys, nullptr, f);
    double err = 0.0, fmax = f.sup_norm();
    for (std::size_t j = 0; j < grid.size; ++j) {
        double G = 0.0;
        for (int m = -8; m <= 8; ++m) {
            const double u = grid.t(j) - 0.5 * m;
            const auto idx = std::llround((u + 1.0) / step);
            if (idx >= 0 && idx < static_cast<long long>(g.size())) G += std::norm(g.samples[static_cast<std::size_t>(idx)]);
        }
        err = std::max(err, std::abs(Sf.value.samples[j] - 2.0 * G * f.samples[j]));
    }
    CHECK(err / fmax < 1e-8);
    CHECK(Sf.rounding == 0.0);
}

TEST_CASE("frame operator structural properties") {
    ModelSetSpec spec;
    spec.scheme = scheme_a();
    spec.window.half_width = 4.0;
    GaborSystem sys;
    sys.windows = {AnalyticWindow::gaussian(), AnalyticWindow::hermite(1, 0.8)};
    sys.nodes = nodes_from(enumerate_model_set(spec, 5.0));
    const GridSpec grid{-4.0, 1.0 / 16.0, 128};
    const auto f1 = random_signal(grid, 2);
    const auto f2 = random_signal(grid, 3);

    const auto a = frame_apply(sys, nullptr, f1);
    const auto b = frame_apply(sys, &sys.windows, f1);
    CHECK(a.value.samples == b.value.samples);

    const cplx al(0.3, -1.2), be(-0.7, 0.4);
    SampledSignal mix = f1;
    for (std::size_t j = 0; j < mix.size(); ++j) mix.samples[j] = al * f1.samples[j] + be * f2.samples[j];
    const auto sm = frame_apply(sys, nullptr, mix);
    const auto s2 = frame_apply(sys, nullptr, f2);
    double lin = 0.0;
    for (std::size_t j = 0; j < mix.size(); ++j)
        lin = std::max(lin, std::abs(sm.value.samples[j] - al * a.value.samples[j] - be * s2.value.samples[j]));
    CHECK(lin < 1e-10);

    const cplx l = grid_inner(a.value, f2);
    const cplx r = grid_inner(f1, s2.value);
    CHECK(std::abs(l - r) < 1e-9);
}

TEST_CASE("covariance of the frame operator") {
    ModelSetSpec spec;
    spec.scheme = scheme_a();
    spec.window.half_width = 4.0;
    GaborSystem sys;
    sys.windows = {AnalyticWindow::gaussian()};
    sys.nodes = nodes_from(enumerate_model_set(spec, 8.0));
    const auto f = AnalyticWindow::gaussian(1.2, {0.2, -0.3});
    const GridSpec grid{-6.0, 1.0 / 16.0, 192};
    CHECK(covariance_residual(sys, nullptr, {0.0, 0.0}, f, grid) < 1e-14);
    CHECK(covariance_residual(sys, nullptr, {0.3, 0.7}, f, grid) < 1e-6);

    GaborSystem lat;
    lat.windows = {AnalyticWindow::gaussian()};
    lat.nodes = nodes_from(PlainLattice::separable(0.5, 0.5), 8.0, 8.0);
    CHECK(covariance_residual(lat, nullptr, {1.0, -0.5}, f, grid) < 1e-8);
}

TEST_CASE("frame bound estimates") {
    // a = b = 1 with the box window: an orthonormal basis
    const double step = 1.0 / 8.0;
    SampledSignal box = SampledSignal::zeros(0.0, step, 8);
    for (auto& s : box.samples) s = 1.0;
    GaborSystem ortho;
    ortho.windows = {box};
    ortho.nodes = separable_nodes(1.0, 1.0, -3, 3, -4, 4);
    const auto fb = frame_bounds_estimate(ortho, GridSpec{-2.0, step, 32}, {}, 7);
    CHECK(std::abs(fb.A - 1.0) < 1e-8);
    CHECK(std::abs(fb.B - 1.0) < 1e-8);

    const double ps = 1.0 / 32.0;
    const auto g = bump_window(ps);
    auto sys = painless_system(g);
    const GridSpec grid{-2.0, ps, 128};
    double gmin = 1e300, gmax = 0.0;
    for (std::size_t j = 0; j < grid.size; ++j) {
        double G = 0.0;
        for (int m = -8; m <= 8; ++m) {
            const auto idx = std::llround((grid.t(j) - 0.5 * m + 1.0) / ps);
            if (idx >= 0 && idx < static_cast<long long>(g.size())) G += std::norm(g.samples[static_cast<std::size_t>(idx)]);
        }
        gmin = std::min(gmin, 2.0 * G);
        gmax = std::max(gmax, 2.0 * G);
    }
    const auto pb = frame_bounds_estimate(sys, grid, {}, 11);
    CHECK(std::abs(pb.A - gmin) / gmin < 0.02);
    CHECK(std::abs(pb.B - gmax) / gmax < 0.02);

    ModelSetSpec spec;
    spec.scheme = scheme_a();
    spec.window.half_width = 0.5;
    GaborSystem sparse;
    sparse.windows = {AnalyticWindow::gaussian()};
    sparse.nodes = nodes_from(enumerate_model_set(spec, 8.0));
    const auto sb = frame_bounds_estimate(sparse, GridSpec{-4.0, 1.0 / 32.0, 256}, {}, 5);
    CHECK(sb.A < 1e-3 * sb.B);
}
