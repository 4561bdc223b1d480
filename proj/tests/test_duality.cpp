#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "mgabor/duality.hpp"

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

ModelSetSpec spec_a(double half_width = 0.5) {
    ModelSetSpec spec;
    spec.scheme = scheme_a();
    spec.window.half_width = half_width;
    return spec;
}

const double kStep = 1.0 / 32.0;

DualityPolicy painless_policy() {
    DualityPolicy p;
    p.nodes = separable_nodes(0.5, 0.5, -8, 9, -32, 32);
    return p;
}

}  // namespace

TEST_CASE("painless dual construction") {
    const auto g = bump_window(kStep);
    const auto pd = painless_dual(0.5, 0.5, g);
    CHECK(pd.symbol_min > 0.0);
    CHECK(pd.symbol_max >= pd.symbol_min);
    // h g summed over a-shifts equals b
    for (std::size_t j = 0; j < g.size(); j += 5) {
        double s = 0.0;
        for (long k = -4; k <= 4; ++k) {
            const long long idx = static_cast<long long>(j) + 16 * k;
            if (idx < 0 || idx >= static_cast<long long>(g.size())) continue;
            s += (g.samples[idx] * std::conj(pd.h.samples[idx])).real();
        }
        if (std::abs(g.samples[j]) > 0.0) CHECK(std::abs(s - 0.5) < 1e-13);
    }
    CHECK_THROWS_WITH(painless_dual(2.5, 0.5, g), "not a painless frame");
    CHECK_THROWS(painless_dual(0.5, 0.75, g));

    double previous = std::numeric_limits<double>::infinity();
    for (double a : {0.5, 0.25, 0.125}) {
        const auto d = painless_dual(a, 0.5, g);
        const double ratio = d.symbol_max / d.symbol_min;
        CHECK(ratio < previous);
        previous = ratio;
    }
    CHECK(previous < 1.001);
}

TEST_CASE("Wexler-Raz and Janssen on the painless fixture") {
    const auto g = bump_window(kStep);
    const auto h = painless_dual(0.5, 0.5, g).h;
    const Domain lattice = PlainLattice::separable(0.5, 0.5);
    const auto wr = wexler_raz_residuals(lattice, {g}, {h});
    CHECK(wr.sup_residual < 1e-8);
    CHECK(wr.report.ok());

    const GridSpec grid{-3.0, kStep, 192};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto f = random_signal(grid, seed);
        const auto jr = janssen_apply(lattice, {g}, {h}, f, grid, painless_policy());
        double gap_f = 0.0, gap_direct_f = 0.0;
        for (std::size_t j = 0; j < grid.size; ++j) {
            gap_f = std::max(gap_f, std::abs(jr.value.samples[j] - f.samples[j]));
            gap_direct_f = std::max(gap_direct_f, std::abs(jr.direct.samples[j] - f.samples[j]));
        }
        CHECK(gap_f / f.sup_norm() < 1e-6);
        CHECK(gap_direct_f / f.sup_norm() < 1e-6);
        CHECK(jr.report.report.gap < 1e-6);
        CHECK(jr.report.report.ok());
    }

    // g paired with itself: Janssen equals the multiplication operator
    const auto f = random_signal(grid, 9);
    const auto jr = janssen_apply(lattice, {g}, {g}, f, grid, painless_policy());
    const auto pd = painless_dual(0.5, 0.5, g);
    double gap = 0.0;
    for (std::size_t j = 0; j < grid.size; ++j) {
        const long long idx = std::llround((grid.t(j) + 1.0) / kStep);
        const auto r = static_cast<std::size_t>(((idx % 16) + 16) % 16);
        double sym = 0.0;
        for (std::size_t k = r; k < g.size(); k += 16) sym += std::norm(g.samples[k]);
        gap = std::max(gap, std::abs(jr.value.samples[j] - 2.0 * sym * f.samples[j]));
    }
    CHECK(gap / f.sup_norm() < 1e-6);
    CHECK(pd.symbol_min > 0.0);
}

TEST_CASE("Wexler-Raz residuals for a Gaussian on Z^2") {
    const auto g0 = AnalyticWindow::gaussian();
    const Domain z2 = PlainLattice::separable(1.0, 1.0);
    const auto wr = wexler_raz_residuals(z2, {g0}, {g0});
    bool off = false;
    for (const auto& e : wr.table) {
        const double oracle = std::exp(-kPi * e.node.dot(e.node) / 2.0);
        CHECK(std::abs(std::abs(e.value) - oracle) < 1e-12);
        if (e.origin) CHECK(std::abs(e.residual) < 1e-12);
        if (!e.origin && std::abs(e.residual) > 1e-3) off = true;
    }
    CHECK(off);
    CHECK_FALSE(wr.report.ok());

    const auto g2 = AnalyticWindow::gaussian(1.0, {}, 2.0);
    const auto wr2 = wexler_raz_residuals(z2, {g0}, {g2});
    REQUIRE(wr2.table.size() == wr.table.size());
    for (std::size_t k = 0; k < wr.table.size(); ++k)
        CHECK(std::abs(wr2.table[k].value - 2.0 * wr.table[k].value) < 1e-13);
}

TEST_CASE("lattice Janssen with Gaussians") {
    const auto g0 = AnalyticWindow::gaussian();
    const GridSpec grid{-4.0, 1.0 / 32.0, 256};
    const auto jr = janssen_apply(PlainLattice::separable(1.0, 1.0), {g0}, {g0}, g0, grid);
    CHECK(jr.report.report.gap < 1e-7);
    CHECK(jr.report.report.ok());

    const auto f = AnalyticWindow::hermite(1, 1.2, {0.3, -0.5});
    const Domain skew = PlainLattice(Eigen::Matrix2d{{0.8, 0.1}, {0.0, 0.9}});
    const auto jr2 = janssen_apply(skew, {g0}, {AnalyticWindow::hermite(2, 0.9)}, f, grid);
    CHECK(jr2.report.report.gap < 1e-6);
}

TEST_CASE("FIGA on lattices") {
    const auto g0 = AnalyticWindow::gaussian();
    WindowFamily w{{g0}, {g0}};
    DualityPolicy p;
    p.primal_radius = 6.0;
    const PlainLattice half = PlainLattice::separable(0.5, 0.5);
    const auto rep = figa_check(half, w, g0, g0, p);
    CHECK(rep.report.gap < 1e-8);
    CHECK(rep.report.ok());
    const auto ns = n_series_lattice(half, w, g0, g0);
    CHECK(rep.report.rhs == ns.series(PhasePoint{0.0, 0.0}));

    const auto odd = AnalyticWindow::hermite(1);
    const auto rep2 = figa_check(PlainLattice::separable(1.0, 1.0), w, g0, odd);
    CHECK(std::abs(rep2.report.lhs.real() - rep2.report.rhs.real()) < 1e-8);
    CHECK(std::abs(rep2.report.lhs - rep2.report.rhs) < 1e-8);
}

TEST_CASE("FIGA and residuals on SCHEME-A") {
    const auto spec = spec_a();
    BumpSpec bs;
    auto bump = std::make_shared<const Bump>(bs);
    const auto kernel = DecayKernel::psi_hat_squared(bump);
    const auto g0 = AnalyticWindow::gaussian();
    const auto f1 = AnalyticWindow::gaussian(1.2, {0.1, 0.2});
    const auto f2 = AnalyticWindow::hermite(1, 0.8);
    WindowFamily w{{g0}, {AnalyticWindow::gaussian(0.9)}};
    const Domain ms = ModelSetDomain{spec, kernel};
    const auto rep = figa_check(ms, w, f1, f2);
    CHECK(rep.report.relative_gap < 1e-6);
    CHECK(rep.report.ok());

    // normalization of the origin row
    const double vol = spec.scheme.volume();
    const double c = std::sqrt(vol / bump->hat_squared(0.0));
    const auto gn = AnalyticWindow::gaussian(1.0, {}, c);
    const auto tight = weighted_tight_residuals(spec, bump, {gn});
    CHECK(std::abs(tight.report.details["origin_normalization_residual"].get<double>()) < 1e-10);
    const auto gd = AnalyticWindow::gaussian(1.0, {}, 2.0 * c);
    const auto tight2 = weighted_tight_residuals(spec, bump, {gd});
    REQUIRE(tight2.table.size() == tight.table.size());
    double quad = 0.0;
    for (std::size_t k = 0; k < tight.table.size(); ++k)
        if (!tight.table[k].origin)
            quad = std::max(quad, std::abs(tight2.table[k].residual - 4.0 * tight.table[k].residual));
    CHECK(quad < 1e-12);

    // against n-series coefficients with f1 = f2 = f
    const auto f = AnalyticWindow::gaussian(1.1);
    WindowFamily ww{{gn}, {gn}};
    NSeriesOptions opt;
    opt.R1 = tight.report.details["dual_radius_time"].get<double>();
    opt.T = tight.report.details["internal_cutoff"].get<double>();
    const auto ns = n_series_modelset(spec, kernel, ww, f, f, opt);
    std::map<std::pair<long long, long long>, cplx> by_node;
    auto key = [](const PhasePoint& p) { return std::make_pair(std::llround(p.x * 1e9), std::llround(p.omega * 1e9)); };
    for (const auto& e : tight.table) by_node[key(e.node)] += e.value;
    std::size_t compared = 0;
    double worst = 0.0;
    for (const auto& term : ns.series.terms) {
        const PhasePoint mu = apply_J(term.freq);
        const cplx ff = std::conj(stft(f, f, mu));
        if (std::abs(ff) < 1e-3) continue;
        const auto it = by_node.find(key(mu));
        REQUIRE(it != by_node.end());
        worst = std::max(worst, std::abs(term.coef / ff - it->second));
        ++compared;
    }
    CHECK(compared > 10);
    CHECK(worst < 1e-8);
}

TEST_CASE("model set Janssen with the psi kernel") {
    const auto spec = spec_a();
    BumpSpec bs;
    auto bump = std::make_shared<const Bump>(bs);
    const Domain ms = ModelSetDomain{spec, DecayKernel::psi_hat_squared(bump)};
    const auto g0 = AnalyticWindow::gaussian();
    const GridSpec grid{-2.0, 1.0 / 16.0, 64};
    const auto jr = janssen_apply(ms, {g0}, {g0}, AnalyticWindow::gaussian(1.1, {0.2, 0.3}), grid);
    CHECK(jr.report.report.gap < 1e-6);
    CHECK(jr.report.report.ok());

    const Domain lim = ModelSetDomain{spec, DecayKernel::phi_limit(spec.window)};
    CHECK_THROWS(wexler_raz_residuals(lim, {g0}, {g0}));
    DualityPolicy p;
    p.T = 20.0;
    const auto wr = wexler_raz_residuals(lim, {g0}, {g0}, p);
    CHECK(wr.report.verdict == Verdict::report_only);
}

TEST_CASE("density diagnostic") {
    const auto g = bump_window(kStep);
    const auto pd = painless_dual(0.5, 0.5, g);
    const Domain lattice = PlainLattice::separable(0.5, 0.5);
    const auto diag = density_diagnostic(lattice, g, pd.h, pd.symbol_max, painless_policy());
    CHECK(diag.density == doctest::Approx(4.0));
    CHECK(diag.consistent);
    CHECK(std::abs(diag.frame_sum - diag.inner_hg) < 1e-10);

    const auto g0 = AnalyticWindow::gaussian();
    BumpSpec bs;
    auto bump = std::make_shared<const Bump>(bs);
    const Domain sparse = ModelSetDomain{spec_a(), DecayKernel::psi_hat_squared(bump)};
    GaborSystem sys;
    sys.windows = {g0};
    sys.nodes = nodes_from(enumerate_model_set(spec_a(), 12.0, bump.get()));
    const auto fb = frame_bounds_estimate(sys, GridSpec{-6.0, 1.0 / 32.0, 384}, {}, 1);
    REQUIRE(fb.converged);
    const auto d2 = density_diagnostic(sparse, g0, g0, fb.B);
    CHECK(d2.density < 1.0);
    CHECK(d2.wr_floor > 0.1);
    CHECK(d2.consistent);

    const auto d3 = density_diagnostic(sparse, g0, AnalyticWindow::gaussian(1.0, {}, 3.0), fb.B);
    CHECK(std::abs(d3.inner_hg - 3.0 * d2.inner_hg) < 1e-12);
    CHECK(std::abs(d3.abs_sum - 9.0 * d2.abs_sum) < 1e-10 * d3.abs_sum);
}
