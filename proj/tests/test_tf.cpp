#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "mgabor/tf.hpp"

using namespace mgabor;

namespace {

cplx trapezoid(const std::function<cplx(double)>& f, double R = 14.0, double h = 1.0 / 128.0) {
    cplx acc = 0.0;
    const int n = static_cast<int>(R / h);
    for (int j = -n; j <= n; ++j) acc += f(j * h);
    return acc * h;
}

AnalyticWindow random_window(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> ord(0, 4);
    AnalyticWindow w;
    w.atoms.clear();
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
        const int k = ord(rng);
        auto a = AnalyticWindow::hermite(k, 0.6 + 0.5 * (u(rng) + 1.0), {1.5 * u(rng), 1.5 * u(rng)},
                                         cplx(u(rng), u(rng)));
        w = w + a;
    }
    return w;
}

}  // namespace

TEST_CASE("Hermite atoms are orthonormal") {
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) {
            auto hj = AnalyticWindow::hermite(j, 1.3);
            auto hk = AnalyticWindow::hermite(k, 1.3);
            const cplx ip = inner_product(hj, hk);
            CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) < 1e-12);
            const cplx q = trapezoid([&](double t) { return hj(t) * std::conj(hk(t)); });
            CHECK(std::abs(q - ip) < 1e-12);
        }
}

TEST_CASE("Gaussian ambiguity closed form") {
    auto g = AnalyticWindow::gaussian();
    CHECK(std::abs(ambiguity(g, g, {1.0, 0.0}) - std::exp(-kPi / 2.0)) < 1e-14);
    for (double x : {-0.7, 0.0, 0.4})
        for (double w : {-1.1, 0.3, 0.9}) {
            const cplx a = ambiguity(g, g, {x, w});
            CHECK(std::abs(a - std::exp(-kPi * (x * x + w * w) / 2.0)) < 1e-14);
            const cplx W = wigner(g, g, {x, w});
            CHECK(std::abs(W - 2.0 * std::exp(-2.0 * kPi * (x * x + w * w))) < 1e-13);
        }
}

TEST_CASE("closed forms agree with brute-force quadrature on random windows") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_window(rng);
        auto g = random_window(rng);
        const PhasePoint z{u(rng), u(rng)};
        const cplx A = trapezoid([&](double t) {
            return f(t + z.x / 2) * std::conj(g(t - z.x / 2)) * cis2pi(-z.omega * t);
        });
        const cplx W = trapezoid([&](double t) {
            return f(z.x + t / 2) * std::conj(g(z.x - t / 2)) * cis2pi(-z.omega * t);
        });
        const cplx V = trapezoid([&](double t) { return f(t) * std::conj(g(t - z.x)) * cis2pi(-z.omega * t); });
        worst = std::max({worst, std::abs(A - ambiguity(f, g, z)), std::abs(W - wigner(f, g, z)),
                          std::abs(V - stft(f, g, z))});
        CHECK(std::abs(stft(f, g, z) - cis2pi(-0.5 * z.x * z.omega) * ambiguity(f, g, z)) < 1e-12);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("time-frequency shift composition and covariance") {
    std::mt19937_64 rng(11);
    auto f = random_window(rng);
    const PhasePoint z{0.3, -0.8}, z0{-1.1, 0.45};
    auto lhs = tf_shift(tf_shift(f, z0), z);
    auto rhs = tf_shift(f, z + z0).scaled(cis2pi(-z.x * z0.omega));
    for (double t : {-1.3, 0.0, 0.77, 2.1}) CHECK(std::abs(lhs(t) - rhs(t)) < 1e-13);
    // pi(z) pi(z0) = e^{-2 pi i sigma(z, z0)} pi(z0) pi(z)
    auto swapped = tf_shift(tf_shift(f, z), z0).scaled(cis2pi(-symplectic(z, z0)));
    for (double t : {-1.3, 0.0, 0.77, 2.1}) CHECK(std::abs(lhs(t) - swapped(t)) < 1e-13);
    // M_w T_x f = e^{2 pi i x w} T_x M_w f
    auto mt = tf_shift(tf_shift(f, {z.x, 0.0}), {0.0, z.omega});
    auto tm = tf_shift(tf_shift(f, {0.0, z.omega}), {z.x, 0.0});
    for (double t : {-1.3, 0.0, 0.77, 2.1}) CHECK(std::abs(mt(t) - cis2pi(z.x * z.omega) * tm(t)) < 1e-12);
    // direct evaluation of pi(z) f
    for (double t : {-0.4, 1.9}) CHECK(std::abs(tf_shift(f, z)(t) - cis2pi(z.omega * t) * f(t - z.x)) < 1e-13);
}

TEST_CASE("ambiguity involution, Wigner symmetry and shift identity") {
    std::mt19937_64 rng(3);
    auto f = random_window(rng);
    auto g = random_window(rng);
    const PhasePoint z{0.6, -0.35}, w{-0.2, 0.9};
    CHECK(std::abs(ambiguity(f, g, z) - std::conj(ambiguity(g, f, -z))) < 1e-12);
    CHECK(std::abs(wigner(f, g, z) - std::conj(wigner(g, f, z))) < 1e-12);
    CHECK(std::abs(wigner(f, f, z).imag()) < 1e-12);
    // A(pi(w) f, pi(w) g)(z) = e^{-2 pi i sigma(w, z)} A(f, g)(z)
    const cplx lhs = ambiguity(tf_shift(f, w), tf_shift(g, w), z);
    const cplx rhs = cis2pi(-symplectic(w, z)) * ambiguity(f, g, z);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 20; ++i) {
        const PhasePoint s{u(rng), u(rng)}, q{u(rng), u(rng)};
        const cplx l = ambiguity(tf_shift(f, s), g, q);
        const cplx r = cis2pi(0.5 * q.x * s.omega - 0.5 * s.x * (q.omega - s.omega)) * ambiguity(f, g, q - s);
        CHECK(std::abs(l - r) < 1e-9);
    }
    // Fourier of the ambiguity is the Wigner distribution: spot check via 2D trapezoid
    const PhasePoint p{0.25, -0.4};
    cplx acc = 0.0;
    const double h = 1.0 / 16.0;
    for (int i = -160; i <= 160; ++i)
        for (int j = -160; j <= 160; ++j) {
            const PhasePoint q{i * h, j * h};
            acc += ambiguity(f, g, q) * cis2pi(symplectic(p, q)) * h * h;
        }
    CHECK(std::abs(acc - wigner(f, g, p)) < 1e-9);
}

TEST_CASE("Fourier transform of windows") {
    std::mt19937_64 rng(5);
    auto f = random_window(rng);
    auto g = random_window(rng);
    auto fh = fourier(f);
    auto gh = fourier(g);
    CHECK(std::abs(inner_product(fh, gh) - inner_product(f, g)) < 1e-12);
    for (double xi : {-0.9, 0.1, 1.4}) {
        const cplx direct = trapezoid([&](double t) { return f(t) * cis2pi(-xi * t); });
        CHECK(std::abs(fh(xi) - direct) < 1e-11);
    }
    auto g0 = AnalyticWindow::gaussian();
    CHECK(std::abs(fourier(g0)(0.37) - g0(0.37)) < 1e-15);
    const PhasePoint z{0.3, -0.6};
    CHECK(std::abs(wigner(fh, gh, z) - wigner(f, g, {-z.omega, z.x})) < 1e-12);
}

TEST_CASE("Moyal identity on a phase-space grid") {
    auto g = AnalyticWindow::gaussian();
    const cplx m = wigner_inner_product(g, g, g, g, 3.0, 1.0 / 16.0);
    CHECK(std::abs(m - 1.0) < 1e-6);
    std::mt19937_64 rng(9);
    auto f1 = AnalyticWindow::hermite(2, 1.0, {0.2, -0.1});
    auto g1 = AnalyticWindow::gaussian(0.8);
    const cplx lhs = wigner_inner_product(f1, g1, f1, g1, 5.0, 1.0 / 16.0);
    CHECK(std::abs(lhs - 1.0) < 1e-6);
}

TEST_CASE("sampled signals") {
    auto g0 = AnalyticWindow::gaussian();
    auto s = render(g0, -8.0, 1.0 / 16.0, 256);
    CHECK(std::abs(s.energy() - 1.0) < 1e-12);
    auto sh = fourier(s);
    CHECK(sh.size() == 256);
    CHECK(std::abs(sh.start + 8.0) < 1e-15);
    CHECK(std::abs(sh.step - 1.0 / 16.0) < 1e-15);
    for (std::size_t k = 0; k < sh.size(); k += 17) CHECK(std::abs(sh.samples[k] - g0(sh.t(k))) < 1e-12);

    const Signal sf = s;
    const Signal af = g0;
    const PhasePoint z{0.5, 0.75};
    auto q1 = ambiguity(sf, af, z);
    auto q2 = ambiguity(af, sf, z);
    auto q3 = ambiguity(sf, sf, z);
    const cplx exact = ambiguity(g0, g0, z);
    CHECK(std::abs(q1.value - exact) < 1e-12);
    CHECK(std::abs(q2.value - exact) < 1e-12);
    CHECK(std::abs(q3.value - exact) < 1e-12);
    auto qw = wigner(sf, af, z);
    CHECK(std::abs(qw.value - wigner(g0, g0, z)) < 1e-12);
    auto qs = stft(sf, af, z);
    CHECK(std::abs(qs.value - stft(g0, g0, z)) < 1e-12);
    CHECK(qs.tail < 1e-12);

    double err = -1.0;
    auto shifted = tf_shift(s, {0.51, 0.0}, &err);
    CHECK(std::abs(err - 0.01) < 1e-12);
    CHECK(std::abs(shifted.samples[128 + 8] - s.samples[128]) < 1e-15);
    CHECK_THROWS_WITH_AS(tf_shift(s, {100.0, 0.0}), "shift out of range", Error);
    CHECK_THROWS_WITH_AS(ambiguity(sf, af, {0.0, 9.0}), "quadrature under-resolved", Error);
    auto other = render(g0, -8.0, 1.0 / 10.0, 160);
    CHECK_THROWS_WITH_AS(inner_product(s, other), "incompatible grids", Error);
}
