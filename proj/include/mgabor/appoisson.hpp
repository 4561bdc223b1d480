#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgabor/bump.hpp"
#include "mgabor/cutproject.hpp"
#include "mgabor/modelset.hpp"
#include "mgabor/report.hpp"
#include "mgabor/tf.hpp"

namespace mgabor {

struct APTerm {
    PhasePoint freq;
    cplx coef{0.0, 0.0};
};

/// Truncated generalized trigonometric series sum_k c_k e^{-2 pi i freq_k . z}.
struct APSeries {
    std::vector<APTerm> terms;
    std::string note;
    double tail = 0.0;

    std::size_t size() const { return terms.size(); }
    cplx operator()(const PhasePoint& z) const;
    /// Merges terms whose frequencies agree within tol.
    void merge_duplicates(double tol = 1e-12);
    /// Sum of the series from several single-window pieces.
    APSeries& operator+=(const APSeries& o);
};

/// F(u) = amplitude * exp(-pi a |u|^2) on R^2.
struct Gaussian2D {
    double amplitude = 1.0;
    double a = 1.0;

    double operator()(const PhasePoint& u) const;
    double hat(const PhasePoint& xi) const;
    /// |u| beyond which F < level * amplitude.
    double radius(double level) const;
    double hat_radius(double level) const;
};

Report psf_lattice_verify(const PlainLattice& lattice, const Gaussian2D& F, const PhasePoint& z, double level = 1e-20);
Report psf_modelset_verify(const ModelSetSpec& spec, const Bump& bump, const Gaussian2D& F, const PhasePoint& z,
                           double level = 1e-18);

/// Physical radius beyond which A(f,g) is negligible (time and frequency essential radii combined).
double ambiguity_radius(const AnalyticWindow& f, const AnalyticWindow& g, double level = 1e-17);

/// Primal series with frequencies lambda in Lambda(Omega) and coefficients w_psi(lambda) A(f,g)(lambda - z).
APSeries bracket_series(const AnalyticWindow& f, const AnalyticWindow& g, const Bump& bump, const ModelSetSpec& spec,
                        const PhasePoint& z, double radius = 0.0);

struct DualSum {
    cplx value{0.0, 0.0};
    double tail = 0.0;
    std::size_t terms = 0;
    double physical_radius = 0.0;
    double internal_cutoff = 0.0;
};

/// Dual evaluation vol^{-1} sum psi_hat(-p2*) M_{-z} W(f_hat, g_hat)(z_tilde - p1*).
DualSum bracket_dual(const AnalyticWindow& f, const AnalyticWindow& g, const Bump& bump, const ModelSetSpec& spec,
                     const PhasePoint& z, const PhasePoint& z_tilde, double level = 1e-10);

/// Exact box average of a series against e^{2 pi i freq . z} over [-R,R]^2.
cplx bohr_mean(const APSeries& series, const PhasePoint& freq, double R);
/// Midpoint-rule box averages of a sampled function at several frequencies in one pass.
std::vector<cplx> bohr_means(const std::function<cplx(const PhasePoint&)>& fn, const std::vector<PhasePoint>& freqs,
                             double R, double step, double max_frequency);
cplx bohr_mean(const std::function<cplx(const PhasePoint&)>& fn, const PhasePoint& freq, double R, double step,
               double max_frequency);

struct WindowFamily {
    std::vector<AnalyticWindow> g;
    std::vector<AnalyticWindow> h;
};

struct NSeriesOptions {
    double R1 = 0.0;           ///< physical dual radius (0: automatic)
    double T = 0.0;            ///< internal cutoff (0: automatic; required for phi_limit)
    double tail_target = 1e-10;
};

struct NSeries {
    APSeries series;
    double R1 = 0.0;
    double T = 0.0;
    double tail = 0.0;
    bool conditional = false;
    std::size_t enumerated = 0;
};

/// <pi(J beta) f1, f2> sum_i <h_i, pi(J beta) g_i>
cplx janssen_coefficient(const WindowFamily& w, const AnalyticWindow& f1, const AnalyticWindow& f2,
                         const PhasePoint& beta);
cplx janssen_window_coefficient(const WindowFamily& w, const PhasePoint& beta);

/// Scale of the model-set dual coefficients: 1/vol for psi_hat_squared, |Omega|/vol for phi kernels.
double kernel_scale(const ModelSetSpec& spec, const DecayKernel& kernel);

/// Physical radius in the dual plane beyond which the given coefficient function is negligible.
double dual_physical_radius(const std::function<double(const PhasePoint&)>& magnitude, double rel_level);
/// Smallest integer cutoff with scale * slab_mass * wiener tail below target (throws for phi_limit).
double internal_cutoff(const DecayKernel& kernel, double scale_times_mass, double target);

NSeries n_series_modelset(const ModelSetSpec& spec, const DecayKernel& kernel, const WindowFamily& w,
                          const AnalyticWindow& f1, const AnalyticWindow& f2, const NSeriesOptions& opt = {});
NSeries n_series_lattice(const PlainLattice& lattice, const WindowFamily& w, const AnalyticWindow& f1,
                         const AnalyticWindow& f2, const NSeriesOptions& opt = {});

struct DirectSum {
    cplx value{0.0, 0.0};
    double tail = 0.0;
    std::size_t terms = 0;
};

/// sum_i sum_lambda w(internal)^2 A(f1,g_i)(lambda - z) conj(A(f2,h_i)(lambda - z)).
DirectSum n_direct_modelset(const ModelSetSpec& spec, const std::function<double(double)>& weight,
                            const WindowFamily& w, const AnalyticWindow& f1, const AnalyticWindow& f2,
                            const PhasePoint& z, double radius = 0.0);
DirectSum n_direct_lattice(const PlainLattice& lattice, const WindowFamily& w, const AnalyticWindow& f1,
                           const AnalyticWindow& f2, const PhasePoint& z, double radius = 0.0);

/// <psi, T_v M_zeta psi> by quadrature on the bump grid.
cplx bump_correlation(const Bump& bump, double v, double zeta);
/// <A(f1,g), T_u M_zeta A(f2,h)> over R^2.
cplx ambiguity_correlation(const AnalyticWindow& f1, const AnalyticWindow& g, const AnalyticWindow& f2,
                           const AnalyticWindow& h, const PhasePoint& u, const PhasePoint& zeta);

struct FFunctionSample {
    PhasePoint z;
    PhasePoint z_tilde;
};

/// Product of two bracket evaluations against the truncated double series over Gamma x Gamma^*.
Report f_function_check(const ModelSetSpec& spec, const Bump& bump, const AnalyticWindow& f1,
                        const AnalyticWindow& f2, const AnalyticWindow& g, const AnalyticWindow& h,
                        const std::vector<FFunctionSample>& samples, int steps = 4);

}  // namespace mgabor
