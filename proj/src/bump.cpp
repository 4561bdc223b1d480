#include "mgabor/bump.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mgabor {

void WindowInterval::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("window half_width must be positive");
}

void BumpSpec::validate() const {
    omega.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("bump eps must lie in (0,1)");
    if (n < 1) throw std::invalid_argument("bump n must be positive");
    if (s_max < 1) throw std::invalid_argument("bump s_max must be positive");
}

double BumpSpec::omega_n_measure() const { return (1.0 - std::pow(eps, n)) * omega.measure(); }

std::vector<double> BumpSpec::factor_widths() const {
    std::vector<double> w;
    const double base = omega_n_measure();
    const double ratio = std::pow(eps, n);
    double scale = 1.0;
    for (int s = 0; s <= s_max; ++s) {
        w.push_back(scale * base);
        scale *= ratio;
    }
    return w;
}

double psi_n_hat(const BumpSpec& spec, double t) {
    double p = 1.0;
    const double base = spec.omega_n_measure();
    const double ratio = std::pow(spec.eps, spec.n);
    double scale = 1.0;
    for (int s = 0; s <= spec.s_max; ++s) {
        p *= sinc(t * scale * base);
        scale *= ratio;
    }
    return p;
}

namespace {

double product_envelope(const std::vector<double>& widths, double t) {
    t = std::abs(t);
    double p = 1.0;
    for (double w : widths) {
        const double x = kPi * t * w;
        if (x > 1.0) p /= x;
    }
    return p;
}

/// Integral of the product envelope over [t0, inf).
double envelope_tail_integral(const std::vector<double>& widths, double t0) {
    t0 = std::max(t0, 1e-12);
    const int steps = 4000;
    const double span = 1e12;
    const double r = std::pow(span, 1.0 / steps);
    double sum = 0.0;
    double a = t0;
    double fa = product_envelope(widths, a);
    for (int i = 0; i < steps; ++i) {
        const double b = a * r;
        const double fb = product_envelope(widths, b);
        sum += 0.5 * (fa + fb) * (b - a);
        a = b;
        fa = fb;
    }
    return sum + fa * a;
}

void ifft_inplace(std::vector<cplx>& data) {
    const int n = static_cast<int>(data.size());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_1d(n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

void fft_inplace(std::vector<cplx>& data) {
    const int n = static_cast<int>(data.size());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

double dual_weight(const BumpSpec& spec, double scheme_volume, double internal_dual_value) {
    if (!(scheme_volume > 0.0)) throw std::invalid_argument("scheme volume must be positive");
    return psi_n_hat(spec, internal_dual_value) / scheme_volume;
}

double psi_n_hat_envelope(const BumpSpec& spec, double t) { return product_envelope(spec.factor_widths(), t); }

std::vector<double> psi_n_values(const BumpSpec& spec, const UniformGrid& grid, int padding) {
    spec.validate();
    if (padding < 4) throw std::invalid_argument("padding must be at least 4");
    if (grid.size < 2 || !(grid.step > 0.0)) throw std::invalid_argument("grid must have positive step");
    const double hw = spec.omega.half_width;
    if (grid.start > -hw || grid.at(grid.size - 1) < hw) throw std::invalid_argument("grid must cover the window");

    const double t_max = 0.5 / grid.step;
    const auto widths = spec.factor_widths();
    const double tail = 2.0 * envelope_tail_integral(widths, t_max);
    if (tail * spec.omega.measure() > 2e-2) throw Error("grid under-resolved");

    const std::size_t M = grid.size * static_cast<std::size_t>(padding);
    const double L = static_cast<double>(M) * grid.step;
    std::vector<cplx> c(M);
    const long long half = static_cast<long long>(M / 2);
    for (long long k = -half; k < static_cast<long long>(M) - half; ++k) {
        const double t = static_cast<double>(k) / L;
        const cplx phase = cis2pi(t * grid.start);
        const std::size_t idx = static_cast<std::size_t>(k < 0 ? k + static_cast<long long>(M) : k);
        c[idx] = psi_n_hat(spec, t) * phase / L;
    }
    ifft_inplace(c);
    std::vector<double> out(grid.size);
    for (std::size_t j = 0; j < grid.size; ++j) out[j] = c[j].real();
    return out;
}

Bump::Bump(BumpSpec spec, std::size_t core_points, int padding) : spec_(spec), padding_(padding) {
    spec_.validate();
    const double W = spec_.omega.measure();
    grid_ = UniformGrid{-W, 2.0 * W / static_cast<double>(core_points), core_points};
    values_ = psi_n_values(spec_, grid_, padding_);
    for (std::size_t j = 0; j < values_.size(); ++j)
        if (!spec_.omega.contains(grid_.at(j))) values_[j] = 0.0;

    const std::size_t M = core_points * static_cast<std::size_t>(padding_);
    period_ = static_cast<double>(M) * grid_.step;
    dt_ = 1.0 / period_;
    t_limit_ = 0.5 / grid_.step;

    std::vector<cplx> buf(M, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < core_points; ++j) buf[j] = values_[j] * values_[j];
    fft_inplace(buf);
    hat_sq_table_.assign(M, 0.0);
    const long long half = static_cast<long long>(M / 2);
    for (long long k = -half; k < static_cast<long long>(M) - half; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k < 0 ? k + static_cast<long long>(M) : k);
        const double t = static_cast<double>(k) * dt_;
        // shift from grid start to the origin
        const cplx v = buf[idx] * grid_.step * cis2pi(-t * grid_.start);
        hat_sq_table_[static_cast<std::size_t>(k + half)] = v.real();
    }

    double l1 = 0.0;
    for (long long k = -half; k < static_cast<long long>(M) - half; ++k)
        l1 += std::abs(psi_n_hat(spec_, static_cast<double>(k) * dt_)) * dt_;
    hat_l1_ = l1 + 2.0 * envelope_tail_integral(spec_.factor_widths(), t_limit_);
}

double Bump::value(double v) const {
    if (!spec_.omega.contains(v) || std::abs(v) >= spec_.omega.half_width) return 0.0;
    const double u = (v - grid_.start) / grid_.step;
    long long j = static_cast<long long>(std::floor(u)) - 1;
    j = std::clamp<long long>(j, 0, static_cast<long long>(grid_.size) - 4);
    const double s = u - static_cast<double>(j);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) l *= (s - b) / static_cast<double>(a - b);
        acc += l * values_[static_cast<std::size_t>(j + a)];
    }
    return acc;
}

double Bump::value_direct(double x) const {
    const long long half = static_cast<long long>(hat_sq_table_.size() / 2);
    double acc = 0.0;
    for (long long k = -half; k < half; ++k) {
        const double t = static_cast<double>(k) / period_;
        acc += psi_n_hat(spec_, t) * std::cos(2.0 * kPi * t * x);
    }
    return acc / period_;
}

double Bump::hat_squared(double t) const {
    t = std::abs(t);
    if (t > t_limit_) throw Error("grid under-resolved");
    constexpr int kHalfStencil = 10;
    const long long half = static_cast<long long>(hat_sq_table_.size() / 2);
    const double u = t / dt_;
    const long long i0 = static_cast<long long>(std::floor(u));
    if (std::abs(u - static_cast<double>(i0)) < 1e-13) {
        const long long idx = i0 + half;
        if (idx >= 0 && idx < static_cast<long long>(hat_sq_table_.size())) return hat_sq_table_[static_cast<std::size_t>(idx)];
    }
    long long lo = i0 - kHalfStencil + 1;
    lo = std::clamp<long long>(lo, -half, half - 2 * kHalfStencil);
    // barycentric Lagrange on equispaced nodes
    double num = 0.0, den = 0.0;
    double w = 1.0;
    for (int j = 0; j < 2 * kHalfStencil; ++j) {
        if (j > 0) w *= -static_cast<double>(2 * kHalfStencil - j) / static_cast<double>(j);
        const double diff = u - static_cast<double>(lo + j);
        if (diff == 0.0) return hat_sq_table_[static_cast<std::size_t>(lo + j + half)];
        const double q = w / diff;
        num += q * hat_sq_table_[static_cast<std::size_t>(lo + j + half)];
        den += q;
    }
    return num / den;
}

DecayKernel DecayKernel::phi_limit(WindowInterval omega) {
    omega.validate();
    DecayKernel k;
    k.kind_ = KernelKind::phi_limit;
    k.omega_ = omega;
    return k;
}

DecayKernel DecayKernel::phi_n(std::shared_ptr<const Bump> bump) {
    DecayKernel k;
    k.kind_ = KernelKind::phi_n;
    k.omega_ = bump->spec().omega;
    k.bump_ = std::move(bump);
    return k;
}

DecayKernel DecayKernel::psi_hat_squared(std::shared_ptr<const Bump> bump) {
    DecayKernel k;
    k.kind_ = KernelKind::psi_hat_squared;
    k.omega_ = bump->spec().omega;
    k.bump_ = std::move(bump);
    return k;
}

DecayKernel DecayKernel::phi_n(const BumpSpec& spec) { return phi_n(std::make_shared<const Bump>(spec)); }

DecayKernel DecayKernel::psi_hat_squared(const BumpSpec& spec) {
    return psi_hat_squared(std::make_shared<const Bump>(spec));
}

double DecayKernel::operator()(double t) const {
    switch (kind_) {
        case KernelKind::phi_limit: return sinc(omega_.measure() * t);
        case KernelKind::phi_n: return omega_.measure() * bump_->hat_squared(t);
        case KernelKind::psi_hat_squared: return bump_->hat_squared(t);
    }
    return 0.0;
}

double DecayKernel::envelope(double t) const {
    t = std::abs(t);
    if (kind_ == KernelKind::phi_limit) return std::min(1.0, 1.0 / (kPi * omega_.measure() * std::max(t, 1e-300)));
    const double scale = kind_ == KernelKind::phi_n ? omega_.measure() : 1.0;
    return scale * 2.0 * bump_->hat_l1() * product_envelope(bump_->spec().factor_widths(), 0.5 * t);
}

double DecayKernel::table_limit() const {
    if (kind_ == KernelKind::phi_limit) return std::numeric_limits<double>::infinity();
    return bump_->hat_squared_limit();
}

const char* DecayKernel::name() const {
    switch (kind_) {
        case KernelKind::phi_limit: return "phi_limit";
        case KernelKind::phi_n: return "phi_n";
        case KernelKind::psi_hat_squared: return "psi_hat_squared";
    }
    return "?";
}

double kernel_eval(const DecayKernel& kernel, double t) { return kernel(t); }

double WienerProfile::tail(std::size_t T) const {
    double s = 0.0;
    for (std::size_t k = sups.size(); k-- > T;) s += sups[k];
    return 2.0 * s + remainder;
}

WienerProfile wiener_profile(const DecayKernel& kernel, double k_max) {
    WienerProfile prof;
    if (k_max <= 0.0) {
        k_max = kernel.kind() == KernelKind::phi_limit ? 4096.0 : std::floor(kernel.table_limit()) - 1.0;
    }
    k_max = std::min(k_max, std::floor(kernel.table_limit()) - 1.0);
    const auto K = static_cast<std::size_t>(std::max(0.0, k_max));
    prof.sups.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double m = 0.0;
        for (int j = 0; j <= 32; ++j) m = std::max(m, std::abs(kernel(static_cast<double>(k) + j / 32.0)));
        prof.sups[k] = m;
    }
    if (!kernel.envelope_summable()) {
        prof.summable = false;
        prof.remainder = std::numeric_limits<double>::infinity();
        return prof;
    }
    // envelope is non-increasing: sum_{k>=K} env(k) <= env(K) + integral_K^inf env
    const auto& widths = kernel.bump()->spec().factor_widths();
    const double scale = (kernel.kind() == KernelKind::phi_n ? kernel.omega().measure() : 1.0) * 2.0 * kernel.bump()->hat_l1();
    const double kk = static_cast<double>(K);
    const double rem = kernel.envelope(kk) + 2.0 * scale * envelope_tail_integral(widths, 0.5 * kk);
    prof.remainder = 2.0 * rem;
    return prof;
}

WienerTail wiener_tail(const DecayKernel& kernel, double T, double k_max) {
    if (T < 0.0) throw std::invalid_argument("T must be nonnegative");
    const auto prof = wiener_profile(kernel, k_max);
    WienerTail out;
    out.k_max = static_cast<double>(prof.sups.size());
    out.summable = prof.summable;
    const auto t0 = static_cast<std::size_t>(std::ceil(T));
    if (t0 >= prof.sups.size() && prof.summable) {
        // envelope only
        const auto& widths = kernel.bump()->spec().factor_widths();
        const double scale = (kernel.kind() == KernelKind::phi_n ? kernel.omega().measure() : 1.0) * 2.0 * kernel.bump()->hat_l1();
        const double tt = static_cast<double>(t0);
        double rem = 2.0 * (kernel.envelope(tt) + 2.0 * scale * envelope_tail_integral(widths, 0.5 * tt));
        out.remainder = rem < 1e-15 ? 0.0 : rem;
        return out;
    }
    double s = 0.0;
    for (std::size_t k = prof.sups.size(); k-- > t0;) s += prof.sups[k];
    out.partial = 2.0 * s;
    out.remainder = prof.remainder;
    return out;
}

}  // namespace mgabor
