#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mgabor {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Library error carrying one of the documented messages.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalized sinc, sin(pi x)/(pi x), with a Taylor branch near zero.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double y = kPi * x;
        const double y2 = y * y;
        return 1.0 - y2 / 6.0 + y2 * y2 / 120.0;
    }
    return std::sin(kPi * x) / (kPi * x);
}

/// e^{2 pi i theta}
inline cplx cis2pi(double theta) {
    const double a = 2.0 * kPi * (theta - std::round(theta));
    return {std::cos(a), std::sin(a)};
}

}  // namespace mgabor
