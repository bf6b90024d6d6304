#pragma once

// The radial self-similar profile with mass alpha in (0, 8pi): zero-flux
// reduction g(r) = g(0) exp(c(r) - c(0) - r^2/4) with r c'(r) equal to minus
// the enclosed mass over 2pi, solved by shooting on g(0).

#include "pks/grid.hpp"

namespace pks {

struct RadialGrid {
    std::vector<real> r;  // strictly increasing, r[0] = 0 allowed

    static RadialGrid uniform(real r_max, int M) {
        require(r_max > 0.0 && M >= 16, "RadialGrid: bad parameters");
        RadialGrid g;
        g.r.resize(M);
        for (int i = 0; i < M; ++i) g.r[i] = r_max * i / (M - 1.0);
        return g;
    }

    int size() const { return static_cast<int>(r.size()); }
    real r_max() const { return r.back(); }
};

/// Converged radial profile: density g, potential derivative cprime, and the
/// drift quotient q(r) = cprime(r)/r (finite at the origin).
struct RadialProfile {
    RadialGrid grid;
    std::vector<real> g;
    std::vector<real> cprime;
    std::vector<real> q;  // cprime / r, q(0) = -g(0)/2
    real mass = 0.0;      // alpha
    real center_value = 0.0;
    real mass_error = 0.0;

    /// Cubic-Hermite sample of a tabulated radial function at radius r
    /// (clamped to the last node).
    static real sample(const RadialGrid& rg, const std::vector<real>& v, real r) {
        const auto& x = rg.r;
        const int M = rg.size();
        if (r <= x.front()) return v.front();
        if (r >= x.back()) return v.back();
        int i = static_cast<int>(std::upper_bound(x.begin(), x.end(), r) - x.begin()) - 1;
        i = std::clamp(i, 0, M - 2);
        real h = x[i + 1] - x[i];
        real t = (r - x[i]) / h;
        auto slope = [&](int j) -> real {
            if (j <= 0) return (v[1] - v[0]) / (x[1] - x[0]);
            if (j >= M - 1) return (v[M - 1] - v[M - 2]) / (x[M - 1] - x[M - 2]);
            return (v[j + 1] - v[j - 1]) / (x[j + 1] - x[j - 1]);
        };
        real m0 = slope(i) * h, m1 = slope(i + 1) * h;
        real t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * v[i + 1] +
               (t3 - t2) * m1;
    }

    /// Beyond the radial grid the density is below the double-precision
    /// Gaussian floor and the drift is the exact point-mass far field.
    real density(real r) const { return r > grid.r_max() ? 0.0 : sample(grid, g, r); }
    real drift_quotient(real r) const {
        if (r > grid.r_max()) return -mass / (TWO_PI * r * r);
        return sample(grid, q, r);
    }
    real potential_derivative(real r) const {
        if (r > grid.r_max()) return -mass / (TWO_PI * r);
        return sample(grid, cprime, r);
    }
};

namespace detail {

/// March the zero-flux fixed form outward for a given center value a;
/// returns the total mass 2pi Int g r dr (composite trapezoid).
inline real march_profile(real a, const RadialGrid& rg, std::vector<real>& g, std::vector<real>& cprime,
                          std::vector<real>& q) {
    const int M = rg.size();
    g.assign(M, 0.0);
    cprime.assign(M, 0.0);
    q.assign(M, 0.0);
    g[0] = a;
    q[0] = -0.5 * a;
    real enclosed = 0.0;  // Int_0^r s g(s) ds
    real cdiff = 0.0;     // c(r) - c(0)
    for (int i = 1; i < M; ++i) {
        real r0 = rg.r[i - 1], r1 = rg.r[i];
        real dr = r1 - r0;
        // Predictor with frozen cprime, then one trapezoid correction.
        real cd_pred = cdiff + dr * cprime[i - 1];
        real g_pred = a * std::exp(cd_pred - 0.25 * r1 * r1);
        real enc_pred = enclosed + 0.5 * dr * (r0 * g[i - 1] + r1 * g_pred);
        real cp_pred = -enc_pred / r1;
        real cd_corr = cdiff + 0.5 * dr * (cprime[i - 1] + cp_pred);
        g[i] = a * std::exp(cd_corr - 0.25 * r1 * r1);
        enclosed += 0.5 * dr * (r0 * g[i - 1] + r1 * g[i]);
        cprime[i] = -enclosed / r1;
        q[i] = cprime[i] / r1;
        cdiff += 0.5 * dr * (cprime[i - 1] + cprime[i]);
    }
    real mass = 0.0;
    for (int i = 1; i < M; ++i) mass += 0.5 * (rg.r[i] - rg.r[i - 1]) * (rg.r[i - 1] * g[i - 1] + rg.r[i] * g[i]);
    return TWO_PI * mass;
}

}  // namespace detail

/// Shooting solve of the profile for mass alpha in (0, 8pi). The default cap
/// at 7.9 pi guards the degenerate end of the range; pass allow_degenerate
/// to override.
inline RadialProfile solve_profile(real alpha, const RadialGrid& rg, real tol = 1e-10,
                                   bool allow_degenerate = false, int max_iter = 200) {
    require(alpha > 0.0 && alpha < EIGHT_PI, "solve_profile: alpha must lie in (0, 8pi)");
    if (!allow_degenerate) require(alpha <= 7.9 * PI, "solve_profile: alpha above 7.9pi needs explicit override");

    std::vector<real> g, cp, q;
    auto mass_of = [&](real a) { return detail::march_profile(a, rg, g, cp, q); };

    // Vanishing-alpha linearization gives g(0) ~ alpha/(4 pi); the
    // aggregation correction only raises the center value.
    real lo = alpha / (4.0 * PI) * 0.5;
    real hi = alpha / (4.0 * PI) * std::exp(alpha / TWO_PI);
    real mlo = mass_of(lo), mhi = mass_of(hi);
    int widen = 0;
    while (mlo > alpha && widen++ < 60) {
        lo *= 0.5;
        mlo = mass_of(lo);
    }
    widen = 0;
    while (mhi < alpha && widen++ < 60) {
        hi *= 2.0;
        mhi = mass_of(hi);
    }
    if (mlo > alpha || mhi < alpha)
        throw solver_error("solve_profile: failed to bracket g(0); mass range [" + std::to_string(mlo) + ", " +
                           std::to_string(mhi) + "]");

    real a = 0.5 * (lo + hi), m = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        // Secant step inside the bracket, bisection fallback.
        real as = lo + (alpha - mlo) * (hi - lo) / (mhi - mlo);
        a = (as > lo && as < hi) ? as : 0.5 * (lo + hi);
        m = mass_of(a);
        if (std::abs(m - alpha) < tol * alpha) {
            RadialProfile p;
            p.grid = rg;
            p.g = g;
            p.cprime = cp;
            p.q = q;
            p.mass = alpha;
            p.center_value = a;
            p.mass_error = std::abs(m - alpha) / alpha;
            return p;
        }
        if (m < alpha) {
            lo = a;
            mlo = m;
        } else {
            hi = a;
            mhi = m;
        }
    }
    throw solver_error("solve_profile: no convergence; final mass bracket [" + std::to_string(mlo) + ", " +
                       std::to_string(mhi) + "] for alpha=" + std::to_string(alpha));
}

/// Radial velocity sampler V(xi) = q(|xi|) xi with q = cprime/r; value 0 at
/// the origin, far field r*cprime -> -alpha/(2pi).
inline void profile_velocity(const RadialProfile& p, real x, real y, real& vx, real& vy) {
    real r = std::sqrt(x * x + y * y);
    real q = p.drift_quotient(r);
    vx = q * x;
    vy = q * y;
}

/// Least-squares slope of log g(r) + r^2/4 against log r over [r_lo, r_hi];
/// the tail exponent, expected -alpha/(2pi).
inline real check_asymptotics(const RadialProfile& p, real r_lo, real r_hi) {
    require(r_lo >= 6.0, "check_asymptotics: window must start at r >= 6");
    require(r_hi <= p.grid.r_max() && r_lo < r_hi, "check_asymptotics: window not inside grid");
    std::vector<real> xs, ys;
    for (int i = 0; i < p.grid.size(); ++i) {
        real r = p.grid.r[i];
        if (r < r_lo || r > r_hi || p.g[i] <= 0.0) continue;
        xs.push_back(std::log(r));
        ys.push_back(std::log(p.g[i]) + 0.25 * r * r);
    }
    require(xs.size() >= 8, "check_asymptotics: fewer than 8 nodes in window");
    real mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    real sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

/// Resample the profile density onto a 2D grid.
inline Field2D profile_density_field(const RadialProfile& p, const Grid2D& g2) {
    Field2D f(g2, 1);
    f.fill(0, [&](real x, real y) -> cplx { return p.density(std::sqrt(x * x + y * y)); });
    return f;
}

/// Resample the profile velocity onto a 2D grid (2-vector).
inline Field2D profile_velocity_field(const RadialProfile& p, const Grid2D& g2) {
    Field2D v(g2, 2);
    for (int iy = 0; iy < g2.N; ++iy) {
        real y = g2.node(iy);
        for (int ix = 0; ix < g2.N; ++ix) {
            real x = g2.node(ix);
            real vx, vy;
            profile_velocity(p, x, y, vx, vy);
            v.at(0, iy, ix) = vx;
            v.at(1, iy, ix) = vy;
        }
    }
    return v;
}

}  // namespace pks
