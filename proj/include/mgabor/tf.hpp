#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "mgabor/common.hpp"

namespace mgabor {

struct PhasePoint {
    double x = 0.0;
    double omega = 0.0;

    PhasePoint operator+(const PhasePoint& o) const { return {x + o.x, omega + o.omega}; }
    PhasePoint operator-(const PhasePoint& o) const { return {x - o.x, omega - o.omega}; }
    PhasePoint operator-() const { return {-x, -omega}; }
    PhasePoint operator*(double s) const { return {s * x, s * omega}; }
    double dot(const PhasePoint& o) const { return x * o.x + omega * o.omega; }
    double norm() const;
};

/// J z for z = (x, omega) is (omega, -x).
inline PhasePoint apply_J(const PhasePoint& z) { return {z.omega, -z.x}; }
/// sigma(theta, z) = theta . J z
inline double symplectic(const PhasePoint& theta, const PhasePoint& z) { return theta.dot(apply_J(z)); }

enum class AtomKind { gaussian, hermite };

/// coef * pi(shift) h_k((t)/width)/sqrt(width), h_k the L2-normalized Hermite function (k = 0 is the Gaussian).
struct Atom {
    cplx coef{1.0, 0.0};
    AtomKind kind = AtomKind::gaussian;
    int order = 0;
    double width = 1.0;
    PhasePoint shift;

    int degree() const { return kind == AtomKind::gaussian ? 0 : order; }
    cplx operator()(double t) const;
};

/// Finite combination of Gaussian/Hermite atoms (d = 1).
struct AnalyticWindow {
    std::vector<Atom> atoms;
    int d = 1;

    static AnalyticWindow gaussian(double width = 1.0, PhasePoint shift = {}, cplx coef = 1.0);
    static AnalyticWindow hermite(int order, double width = 1.0, PhasePoint shift = {}, cplx coef = 1.0);

    cplx operator()(double t) const;
    AnalyticWindow scaled(cplx c) const;
    AnalyticWindow operator+(const AnalyticWindow& o) const;
    /// Radius outside of which every atom is below `level` relative to its peak.
    double essential_radius(double level = 1e-17) const;
};

/// Uniformly sampled complex signal on t_j = start + j*step.
struct SampledSignal {
    double start = 0.0;
    double step = 1.0;
    std::vector<cplx> samples;

    std::size_t size() const { return samples.size(); }
    double t(std::size_t j) const { return start + step * static_cast<double>(j); }
    double end() const { return t(samples.size() - 1); }
    double energy() const;
    double norm() const;
    double sup_norm() const;

    static SampledSignal zeros(double start, double step, std::size_t n);
};

SampledSignal render(const AnalyticWindow& f, double start, double step, std::size_t n);
SampledSignal render(const AnalyticWindow& f, const SampledSignal& grid_like);

using Signal = std::variant<AnalyticWindow, SampledSignal>;

/// Quadrature value with an estimate of the truncated tail.
struct Quadrature {
    cplx value{0.0, 0.0};
    double tail = 0.0;
};

AnalyticWindow tf_shift(const AnalyticWindow& f, const PhasePoint& z);
/// Shift rounded to the grid; rounding error written to `rounding_error` when given.
SampledSignal tf_shift(const SampledSignal& f, const PhasePoint& z, double* rounding_error = nullptr);
Signal tf_shift(const Signal& f, const PhasePoint& z);

AnalyticWindow fourier(const AnalyticWindow& f);
/// Unitary DFT approximating the continuous transform; zero-pads to a power of two.
SampledSignal fourier(const SampledSignal& f);

cplx inner_product(const AnalyticWindow& f, const AnalyticWindow& g);
Quadrature inner_product(const SampledSignal& f, const SampledSignal& g);
Quadrature inner_product(const SampledSignal& f, const AnalyticWindow& g);
Quadrature inner_product(const Signal& f, const Signal& g);

/// <f, pi(z) g>
cplx stft(const AnalyticWindow& f, const AnalyticWindow& g, const PhasePoint& z);
Quadrature stft(const Signal& f, const Signal& g, const PhasePoint& z);

cplx ambiguity(const AnalyticWindow& f, const AnalyticWindow& g, const PhasePoint& z);
Quadrature ambiguity(const Signal& f, const Signal& g, const PhasePoint& z);

cplx wigner(const AnalyticWindow& f, const AnalyticWindow& g, const PhasePoint& z);
Quadrature wigner(const Signal& f, const Signal& g, const PhasePoint& z);

/// Phase-space grid evaluation of <W(f1,g1), W(f2,g2)> by the trapezoid rule on [-R,R]^2.
cplx wigner_inner_product(const AnalyticWindow& f1, const AnalyticWindow& g1, const AnalyticWindow& f2,
                          const AnalyticWindow& g2, double R, double step);

struct ProductFactor {
    const AnalyticWindow* window = nullptr;
    double sigma = 1.0;
    double rho = 0.0;
    bool conj = false;
};

/// Closed-form integral over R of prod_f w_f(sigma_f t + rho_f) (conjugated when flagged) e^{-2 pi i frequency t}.
cplx product_integral(const std::vector<ProductFactor>& factors, double frequency);

/// Physicists' Hermite polynomial at a complex argument.
cplx hermite_polynomial(int k, cplx z);

}  // namespace mgabor
