#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mgabor/common.hpp"

namespace mgabor {

/// Symmetric internal window [-half_width, half_width].
struct WindowInterval {
    double half_width = 0.5;

    double measure() const { return 2.0 * half_width; }
    bool contains(double v) const { return v >= -half_width && v <= half_width; }
    void validate() const;
};

/// Parameters of the bump psi_n built as a convolution product of normalized indicators.
struct BumpSpec {
    WindowInterval omega;
    double eps = 0.5;
    int n = 1;
    int s_max = 40;

    void validate() const;
    /// |Omega_n| = (1 - eps^n) |Omega|
    double omega_n_measure() const;
    /// Widths |eps^{ns} Omega_n| of the retained factors, s = 0..s_max.
    std::vector<double> factor_widths() const;
};

struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t size = 0;

    double at(std::size_t j) const { return start + step * static_cast<double>(j); }
};

/// Product of sinc factors, the Fourier transform of psi_n.
double psi_n_hat(const BumpSpec& spec, double t);

/// Samples psi_n on the grid by inverse DFT of psi_n_hat with padding factor `padding` (at least 4).
std::vector<double> psi_n_values(const BumpSpec& spec, const UniformGrid& grid, int padding = 4);

/// Monotone envelope of |psi_n_hat| on [|t|, inf).
double psi_n_hat_envelope(const BumpSpec& spec, double t);

/// psi_n tabulated once on the default grid; read-only afterwards.
class Bump {
public:
    explicit Bump(BumpSpec spec, std::size_t core_points = std::size_t{1} << 14, int padding = 4);

    const BumpSpec& spec() const { return spec_; }
    const UniformGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    /// psi_n at an internal value (cubic interpolation, 0 outside Omega).
    double value(double v) const;
    double hat(double t) const { return psi_n_hat(spec_, t); }
    /// Fourier transform of psi_n^2.
    double hat_squared(double t) const;
    /// Largest |t| covered by the psi_n^2 transform table.
    double hat_squared_limit() const { return t_limit_; }
    /// Reference evaluation of psi_n at x by a direct inverse DFT sum.
    double value_direct(double x) const;
    double hat_l1() const { return hat_l1_; }
    double l2_norm_squared() const { return hat_sq_table_[hat_sq_table_.size() / 2]; }

private:
    BumpSpec spec_;
    UniformGrid grid_;
    std::vector<double> values_;
    int padding_ = 4;
    double period_ = 0.0;
    double dt_ = 0.0;
    double t_limit_ = 0.0;
    double hat_l1_ = 0.0;
    std::vector<double> hat_sq_table_;
};

/// w_psi at an internal value.
inline double weight(const Bump& bump, double internal_value) { return bump.value(internal_value); }

/// vol(Gamma)^{-1} psi_n_hat(v).
double dual_weight(const BumpSpec& spec, double scheme_volume, double internal_dual_value);

enum class KernelKind { phi_limit, phi_n, psi_hat_squared };

/// Internal-space decay kernel used by the dual-side series.
class DecayKernel {
public:
    static DecayKernel phi_limit(WindowInterval omega);
    static DecayKernel phi_n(const BumpSpec& spec);
    static DecayKernel psi_hat_squared(const BumpSpec& spec);
    static DecayKernel phi_n(std::shared_ptr<const Bump> bump);
    static DecayKernel psi_hat_squared(std::shared_ptr<const Bump> bump);

    KernelKind kind() const { return kind_; }
    const WindowInterval& omega() const { return omega_; }
    const std::shared_ptr<const Bump>& bump() const { return bump_; }

    double operator()(double t) const;
    /// Non-increasing bound on |kernel| beyond |t|.
    double envelope(double t) const;
    bool envelope_summable() const { return kind_ != KernelKind::phi_limit; }
    /// Largest |t| at which the kernel is tabulated (infinite for the closed form).
    double table_limit() const;
    const char* name() const;

private:
    KernelKind kind_ = KernelKind::phi_limit;
    WindowInterval omega_;
    std::shared_ptr<const Bump> bump_;
};

double kernel_eval(const DecayKernel& kernel, double t);

/// Wiener amalgam tail: sum of local sups over unit intervals outside [-T, T].
struct WienerTail {
    double partial = 0.0;    ///< explicit sum up to K_max
    double remainder = 0.0;  ///< envelope bound beyond K_max (infinite if not summable)
    bool summable = true;
    double k_max = 0.0;

    double value() const { return partial + remainder; }
};

WienerTail wiener_tail(const DecayKernel& kernel, double T, double k_max = 0.0);

/// Per-interval sups used for scanning cutoffs; entry k covers [k, k+1].
struct WienerProfile {
    std::vector<double> sups;
    double remainder = 0.0;
    bool summable = true;

    /// Tail value beyond integer cutoff T (both sides).
    double tail(std::size_t T) const;
};

WienerProfile wiener_profile(const DecayKernel& kernel, double k_max = 0.0);

}  // namespace mgabor
