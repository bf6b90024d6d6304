#pragma once

// Spatial discretization: the truncated square [-R,R]^2 with cell-centered
// nodes, complex fields on it, and the weighted L^p(m) norms.

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "pks/common.hpp"

namespace pks {

/// Uniform cell-centered grid on [-R,R]^2. Nodes xi_i = -R + (i+1/2)h never
/// sit on the corner singularity of the convolution kernels.
struct Grid2D {
    real R = 0.0;
    int N = 0;
    real h = 0.0;

    real node(int i) const { return -R + (i + 0.5) * h; }

    /// Spectral wavenumber for FFT bin m: k = pi * m~ / R.
    real wavenumber(int m) const {
        int mt = (m < N / 2) ? m : m - N;
        return PI * mt / R;
    }

    bool operator==(const Grid2D& o) const { return R == o.R && N == o.N; }
    bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

inline Grid2D make_grid(real R, int N) {
    require(R > 0.0, "make_grid: R must be positive");
    require(N >= 16, "make_grid: N must be at least 16");
    require(N % 2 == 0, "make_grid: N must be even");
    Grid2D g;
    g.R = R;
    g.N = N;
    g.h = 2.0 * R / N;
    return g;
}

/// Weight/integrability pair for || f ||_{L^p(m)}. p = inf is encoded as
/// p = std::numeric_limits<real>::infinity().
struct WeightSpec {
    real m = 3.0;
    real p = 2.0;
};

inline constexpr real P_INF = std::numeric_limits<real>::infinity();

/// Complex field sampled on a Grid2D; 1 (scalar), 2 (xi-vector) or
/// 3 (xi-vector plus z-component) planes, stored plane-major.
class Field2D {
  public:
    Field2D() = default;
    Field2D(const Grid2D& g, int components = 1)
        : grid_(g), comps_(components), data_(static_cast<size_t>(components) * g.N * g.N, cplx(0.0, 0.0)) {
        require(components >= 1 && components <= 3, "Field2D: components in {1,2,3}");
    }

    const Grid2D& grid() const { return grid_; }
    int components() const { return comps_; }
    int n() const { return grid_.N; }
    size_t plane_size() const { return static_cast<size_t>(grid_.N) * grid_.N; }

    cplx* plane(int c) { return data_.data() + c * plane_size(); }
    const cplx* plane(int c) const { return data_.data() + c * plane_size(); }

    cplx& at(int c, int iy, int ix) { return data_[c * plane_size() + static_cast<size_t>(iy) * grid_.N + ix]; }
    const cplx& at(int c, int iy, int ix) const {
        return data_[c * plane_size() + static_cast<size_t>(iy) * grid_.N + ix];
    }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    bool finite() const { return all_finite(data_); }

    /// Fill component c from a pointwise function of (x, y).
    void fill(int c, const std::function<cplx(real, real)>& f) {
        for (int iy = 0; iy < grid_.N; ++iy) {
            real y = grid_.node(iy);
            for (int ix = 0; ix < grid_.N; ++ix) at(c, iy, ix) = f(grid_.node(ix), y);
        }
    }

    Field2D& operator+=(const Field2D& o) {
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Field2D& operator-=(const Field2D& o) {
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Field2D& operator*=(cplx a) {
        for (auto& z : data_) z *= a;
        return *this;
    }
    friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
    friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
    friend Field2D operator*(cplx a, Field2D f) { return f *= a; }

    void axpy(cplx a, const Field2D& x) {
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
    }

  private:
    Grid2D grid_;
    int comps_ = 1;
    std::vector<cplx> data_;
};

/// Midpoint quadrature of one component (exactly h^2 * sum of samples).
inline cplx integral(const Field2D& f, int c = 0) {
    cplx s(0.0, 0.0);
    const cplx* p = f.plane(c);
    for (size_t i = 0; i < f.plane_size(); ++i) s += p[i];
    return s * (f.grid().h * f.grid().h);
}

/// || f ||_{L^p(m)} by midpoint quadrature of <xi>^{pm} |f|^p; p = inf is
/// the weighted sup over nodes. Vector fields use the Euclidean magnitude.
inline real weighted_norm(const Field2D& f, const WeightSpec& w = {}) {
    require(f.finite(), "weighted_norm: field has non-finite samples");
    const Grid2D& g = f.grid();
    const bool sup = std::isinf(w.p);
    real acc = 0.0;
    for (int iy = 0; iy < g.N; ++iy) {
        real y = g.node(iy);
        for (int ix = 0; ix < g.N; ++ix) {
            real x = g.node(ix);
            real mag2 = 0.0;
            for (int c = 0; c < f.components(); ++c) mag2 += std::norm(f.at(c, iy, ix));
            real br = bracket(x, y);
            if (sup) {
                acc = std::max(acc, std::pow(br, w.m) * std::sqrt(mag2));
            } else {
                acc += std::pow(br, w.p * w.m) * std::pow(mag2, 0.5 * w.p);
            }
        }
    }
    if (sup) return acc;
    return std::pow(g.h * g.h * acc, 1.0 / w.p);
}

/// Mass fraction in the band within R/8 of the boundary; the wrap-around
/// monitor for the periodic truncation.
inline real boundary_band_mass(const Field2D& f, int c = 0) {
    const Grid2D& g = f.grid();
    real band = g.R / 8.0;
    real in_band = 0.0, total = 0.0;
    for (int iy = 0; iy < g.N; ++iy) {
        for (int ix = 0; ix < g.N; ++ix) {
            real a = std::abs(f.at(c, iy, ix));
            total += a;
            if (g.R - std::abs(g.node(ix)) < band || g.R - std::abs(g.node(iy)) < band) in_band += a;
        }
    }
    return total > 0.0 ? in_band / total : 0.0;
}

/// C-infinity bump supported on |xi| < R/2, grid-normalized to unit mass.
inline Field2D unit_bump(const Grid2D& g) {
    Field2D b(g, 1);
    const real rho = 0.5 * g.R;
    b.fill(0, [&](real x, real y) -> cplx {
        real s = (x * x + y * y) / (rho * rho);
        if (s >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - s));
    });
    cplx mass = integral(b, 0);
    b *= 1.0 / mass.real();
    return b;
}

/// Remove the quadrature mean by subtracting a scaled compactly supported
/// bump: the result has zero discrete integral and unchanged tails.
inline Field2D zero_mean_project(const Field2D& f) {
    require(f.components() == 1, "zero_mean_project: scalar fields only");
    Field2D out = f;
    cplx mass = integral(f, 0);
    Field2D b = unit_bump(f.grid());
    out.axpy(-mass, b);
    return out;
}

}  // namespace pks
