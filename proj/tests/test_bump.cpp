#include <cmath>
#include <functional>

#include "doctest.h"
#include "mgabor/bump.hpp"

using namespace mgabor;

namespace {

BumpSpec unit_spec(int n) {
    BumpSpec s;
    s.omega.half_width = 0.5;
    s.eps = 0.5;
    s.n = n;
    s.s_max = 40;
    return s;
}

double max_gap(const std::function<double(double)>& f, const std::function<double(double)>& g, double a, double b) {
    double m = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = a + (b - a) * i / 2000.0;
        m = std::max(m, std::abs(f(t) - g(t)));
    }
    return m;
}

}  // namespace

TEST_CASE("sinc near zero") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1e-5) == doctest::Approx(std::sin(kPi * 1e-5) / (kPi * 1e-5)).epsilon(1e-15));
    CHECK(std::abs(sinc(3.0)) < 1e-15);
}

TEST_CASE("psi_n_hat basics") {
    const auto s = unit_spec(1);
    CHECK(psi_n_hat(s, 0.0) == 1.0);
    CHECK(std::abs(psi_n_hat(s, 1.0 / s.omega_n_measure())) < 1e-15);
    CHECK(psi_n_hat(s, 1.0) == doctest::Approx(0.55377127588881014).epsilon(1e-14));
    auto s80 = s;
    s80.s_max = 80;
    CHECK(std::abs(psi_n_hat(s, 1.0) - psi_n_hat(s80, 1.0)) < 1e-10);
    for (double t : {0.3, 1.7, 12.5, 140.0}) CHECK(psi_n_hat(s, t) == psi_n_hat(s, -t));
    CHECK(dual_weight(s, 6.74486, 0.0) == doctest::Approx(1.0 / 6.74486));
    CHECK(dual_weight(s, 2.0, 1.0) == doctest::Approx(0.5 * 0.55377127588881014));
}

TEST_CASE("psi_n sampled values") {
    const Bump b(unit_spec(1));
    const auto& g = b.grid();
    const auto& v = b.values();
    double integral = 0.0, outside = 0.0, minimum = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        integral += v[j] * g.step;
        if (std::abs(g.at(j)) > 0.5) outside = std::max(outside, std::abs(v[j]));
        minimum = std::min(minimum, v[j]);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(outside < 1e-6);
    CHECK(minimum > -1e-9);
    // oracle: numeric inverse Fourier integral of the sinc product
    CHECK(b.value(0.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(b.value(0.2) == doctest::Approx(1.39783312876089).epsilon(1e-8));
    CHECK(b.value(0.37) == doctest::Approx(0.159688888818095).epsilon(1e-8));
    CHECK(b.value(0.5) == 0.0);
    CHECK(b.value(-0.7) == 0.0);
    for (double x : {0.123456, -0.31415, 0.4444})
        CHECK(std::abs(b.value(x) - b.value_direct(x)) < 1e-6);
}

TEST_CASE("psi_n approaches the normalized indicator") {
    const Bump b3(unit_spec(3)), b6(unit_spec(6));
    double d3 = 0.0, d6 = 0.0;
    for (int i = -400; i <= 400; ++i) {
        const double x = i * 0.001;
        d3 = std::max(d3, std::abs(b3.value(x) - 1.0));
        d6 = std::max(d6, std::abs(b6.value(x) - 1.0));
    }
    CHECK(d6 < d3);
}

TEST_CASE("DFT of sampled psi_n matches psi_n_hat") {
    const auto s = unit_spec(1);
    UniformGrid grid{-1.0, 2.0 / 4096.0, 4096};
    const auto v = psi_n_values(s, grid);
    const double L = grid.step * static_cast<double>(grid.size);
    double err = 0.0;
    for (int k = -60; k <= 60; k += 3) {
        const double t = k / L;
        cplx acc = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] * grid.step * cis2pi(-t * grid.at(j));
        err = std::max(err, std::abs(acc - psi_n_hat(s, t)));
    }
    CHECK(err < 1e-8);
}

TEST_CASE("coarse grid is under-resolved") {
    UniformGrid grid{-1.0, 2.0 / 64.0, 64};
    CHECK_THROWS_WITH(psi_n_values(unit_spec(4), grid), "grid under-resolved");
}

TEST_CASE("psi_n^2 transform table") {
    const Bump b(unit_spec(1));
    // oracle: convolution of psi_n_hat with itself by adaptive quadrature
    CHECK(b.hat_squared(0.0) == doctest::Approx(1.61774707193594).epsilon(1e-9));
    CHECK(b.hat_squared(1.3) == doctest::Approx(0.83451400258002).epsilon(1e-9));
    CHECK(b.hat_squared(7.7) == doctest::Approx(0.00241445568032281).epsilon(1e-7));
    // interpolation vs direct trapezoid transform of psi^2
    const auto& g = b.grid();
    const auto& v = b.values();
    for (double t : {0.0371, 2.71828, 33.3333, 250.123}) {
        double acc = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] * v[j] * g.step * std::cos(2 * kPi * t * g.at(j));
        CHECK(std::abs(b.hat_squared(t) - acc) < 1e-12);
    }
    CHECK_THROWS_WITH(b.hat_squared(1e5), "grid under-resolved");
}

TEST_CASE("decay kernels") {
    const auto lim = DecayKernel::phi_limit(WindowInterval{0.5});
    CHECK(lim(0.0) == 1.0);
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(lim(static_cast<double>(k))) < 1e-12);
    for (double t : {0.2, 1.4, 9.1}) CHECK(lim(t) == lim(-t));

    const auto k6 = DecayKernel::phi_n(unit_spec(6));
    CHECK(k6(0.0) == doctest::Approx(1.0).epsilon(0.02));
    for (double t : {0.2, 1.4, 9.1}) CHECK(std::abs(k6(t) - k6(-t)) < 1e-12);

    const auto k4 = DecayKernel::phi_n(unit_spec(4));
    const auto k8 = DecayKernel::phi_n(unit_spec(8));
    const double g4 = max_gap(k4, lim, -5, 5);
    const double g8 = max_gap(k8, lim, -5, 5);
    CHECK(g8 < 0.05);
    CHECK(g8 < g4);
    CHECK(g8 < 2e-2);
}

TEST_CASE("uniform Cauchy property of psi_n_hat") {
    auto h = [](int n) { return [n](double t) { return psi_n_hat(unit_spec(n), t); }; };
    const double d24 = max_gap(h(2), h(4), -20, 20);
    const double d46 = max_gap(h(4), h(6), -20, 20);
    const double d68 = max_gap(h(6), h(8), -20, 20);
    CHECK(d46 < d24);
    CHECK(d68 < d46);
}

TEST_CASE("Wiener tails") {
    const auto k3 = DecayKernel::phi_n(unit_spec(3));
    const auto t0 = wiener_tail(k3, 0.0);
    CHECK(t0.summable);
    CHECK(std::isfinite(t0.value()));
    CHECK(wiener_tail(k3, 5.0).value() < t0.value());
    CHECK(wiener_tail(k3, 50.0).value() < wiener_tail(k3, 5.0).value());

    const auto lim = DecayKernel::phi_limit(WindowInterval{0.5});
    const auto l10 = wiener_tail(lim, 10.0);
    const auto l100 = wiener_tail(lim, 100.0);
    CHECK_FALSE(l10.summable);
    CHECK(std::isinf(l10.value()));
    // partial sums follow the harmonic envelope 2/(pi |Omega|) * log(100/10)
    const double diff = l10.partial - l100.partial;
    CHECK(diff == doctest::Approx(2.0 / kPi * std::log(10.0)).epsilon(0.1));

    const auto k1 = DecayKernel::phi_n(unit_spec(1));
    CHECK(wiener_tail(k1, 1e4).value() == 0.0);
}
