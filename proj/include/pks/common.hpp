#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pks {

using real = double;
using cplx = std::complex<double>;

inline constexpr real PI = 3.14159265358979323846;
inline constexpr real TWO_PI = 2.0 * PI;
inline constexpr real EIGHT_PI = 8.0 * PI;

/// Error carrying a violated precondition (CLI maps these to exit code 2).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Error carrying a runtime/solver failure (CLI maps these to exit code 1).
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw precondition_error(what);
}

inline bool is_finite(const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool all_finite(const std::vector<cplx>& v) {
    for (const auto& z : v)
        if (!is_finite(z)) return false;
    return true;
}

/// <xi> = (1 + |xi|^2)^{1/2}
inline real bracket(real x, real y) { return std::sqrt(1.0 + x * x + y * y); }

/// a(tau) = 1 - exp(-tau); rejects negative tau.
inline real a_of_tau(real tau) {
    require(tau >= 0.0, "a_of_tau: tau must be nonnegative");
    return -std::expm1(-tau);
}

}  // namespace pks
