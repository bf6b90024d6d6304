#pragma once

// Free-space inverses on the truncated plane via zero-padded doubling
// (Hockney). The Coulomb part always goes through exact truncated kernels
// (periodic symbol division of -Laplacian is ill-posed on the mean); the
// kernels are cell-averaged analytically, so potentials and velocities are
// clean second-order quadratures of the continuum convolutions. Screened
// corrections are bounded symbols on the doubled grid.

#include <memory>

#include "pks/spectral.hpp"

namespace pks {

namespace detail {

/// Antiderivative with d2/dxdy P_log = (1/2) log(x^2+y^2) = log r.
inline real P_log(real x, real y) {
    real r2 = x * x + y * y;
    real t = 0.0;
    if (r2 > 0.0) t += x * y * std::log(r2);
    if (x != 0.0) t += x * x * std::atan(y / x);
    if (y != 0.0) t += y * y * std::atan(x / y);
    return 0.5 * (t - 3.0 * x * y);
}

/// Antiderivative with d2/dxdy P_gx = x/(x^2+y^2).
inline real P_gx(real x, real y) {
    real r2 = x * x + y * y;
    real t = -2.0 * y;
    if (r2 > 0.0) t += y * std::log(r2);
    if (x != 0.0) t += 2.0 * x * std::atan(y / x);
    return 0.5 * t;
}

/// Average of a kernel over the cell [x-h/2,x+h/2]^2 via corner differences.
template <typename P>
inline real cell_average(P&& p, real x, real y, real h) {
    real a = 0.5 * h;
    return (p(x + a, y + a) - p(x - a, y + a) - p(x + a, y - a) + p(x - a, y - a)) / (h * h);
}

}  // namespace detail

/// Analytic cell average of log|xi| over the square [-a,a]^2:
///   log a + (log 2 - 3 + pi/2)/2.
inline real log_cell_average(real a) { return std::log(a) + 0.5 * (std::log(2.0) - 3.0 + 0.5 * PI); }

/// Workspace for doubled-grid convolutions tied to one Grid2D. Holds the
/// transformed truncated kernels of (-Delta)^{-1} and grad(-Delta)^{-1};
/// read-only after construction, shareable across threads.
class FreeSpaceWorkspace {
  public:
    explicit FreeSpaceWorkspace(const Grid2D& g) : grid_(g), Nd_(2 * g.N) {
        const size_t n2 = static_cast<size_t>(Nd_) * Nd_;
        khat_log_.assign(n2, cplx(0.0, 0.0));
        khat_gx_.assign(n2, cplx(0.0, 0.0));
        khat_gy_.assign(n2, cplx(0.0, 0.0));
        const real h = g.h;
        const real w = h * h;  // quadrature weight folded into the kernel
        for (int iy = 0; iy < Nd_; ++iy) {
            int ly = signed_mode(iy, Nd_);
            for (int ix = 0; ix < Nd_; ++ix) {
                int lx = signed_mode(ix, Nd_);
                real x = lx * h, y = ly * h;
                size_t idx = static_cast<size_t>(iy) * Nd_ + ix;
                khat_log_[idx] = cplx(-w / TWO_PI * detail::cell_average(detail::P_log, x, y, h), 0.0);
                khat_gx_[idx] = cplx(-w / TWO_PI * detail::cell_average(detail::P_gx, x, y, h), 0.0);
                khat_gy_[idx] = cplx(-w / TWO_PI * detail::cell_average([](real a, real b) { return detail::P_gx(b, a); }, x, y, h),
                                     0.0);
            }
        }
        fft2(khat_log_.data(), Nd_, Nd_, FFTW_FORWARD);
        fft2(khat_gx_.data(), Nd_, Nd_, FFTW_FORWARD);
        fft2(khat_gy_.data(), Nd_, Nd_, FFTW_FORWARD);
    }

    const Grid2D& grid() const { return grid_; }
    int doubled() const { return Nd_; }

    /// m-th wavenumber of the doubled grid (half-width 2R).
    real wavenumber(int m) const { return PI * signed_mode(m, Nd_) / (2.0 * grid_.R); }

    const cplx& khat_log(int iy, int ix) const { return khat_log_[static_cast<size_t>(iy) * Nd_ + ix]; }
    const cplx& khat_grad(int c, int iy, int ix) const {
        return (c == 0 ? khat_gx_ : khat_gy_)[static_cast<size_t>(iy) * Nd_ + ix];
    }

    /// Zero-pad one component into a doubled-grid buffer and transform.
    void pad_forward(const Field2D& f, int c, std::vector<cplx>& buf) const {
        buf.assign(static_cast<size_t>(Nd_) * Nd_, cplx(0.0, 0.0));
        const int N = grid_.N;
        for (int iy = 0; iy < N; ++iy)
            std::copy(f.plane(c) + static_cast<size_t>(iy) * N, f.plane(c) + static_cast<size_t>(iy) * N + N,
                      buf.begin() + static_cast<size_t>(iy) * Nd_);
        fft2(buf.data(), Nd_, Nd_, FFTW_FORWARD);
    }

    /// Inverse-transform a doubled-grid spectrum and restrict to the window.
    void extract_backward(std::vector<cplx>& buf, Field2D& out, int c) const {
        fft2(buf.data(), Nd_, Nd_, FFTW_BACKWARD);
        const int N = grid_.N;
        const real inv = 1.0 / (static_cast<real>(Nd_) * Nd_);
        for (int iy = 0; iy < N; ++iy)
            for (int ix = 0; ix < N; ++ix) out.at(c, iy, ix) = buf[static_cast<size_t>(iy) * Nd_ + ix] * inv;
    }

  private:
    Grid2D grid_;
    int Nd_;
    std::vector<cplx> khat_log_, khat_gx_, khat_gy_;
};

namespace detail {

inline std::shared_ptr<const FreeSpaceWorkspace> freespace_for(const Grid2D& g) {
    static std::mutex mu;
    static std::map<std::pair<long long, int>, std::shared_ptr<const FreeSpaceWorkspace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<long long>(std::llround(g.R * 1e12)), g.N);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_shared<FreeSpaceWorkspace>(g)).first;
    return it->second;
}

}  // namespace detail

/// Generic doubled-grid application: out_c = IFFT[ sym(ws,iy,ix) * FFT(pad f_c) ].
template <typename Sym>
inline void padded_apply(const Field2D& f, int c_in, Field2D& out, int c_out, Sym&& sym) {
    auto ws = detail::freespace_for(f.grid());
    std::vector<cplx> buf;
    ws->pad_forward(f, c_in, buf);
    const int Nd = ws->doubled();
    for (int iy = 0; iy < Nd; ++iy)
        for (int ix = 0; ix < Nd; ++ix) buf[static_cast<size_t>(iy) * Nd + ix] *= sym(*ws, iy, ix);
    ws->extract_backward(buf, out, c_out);
}

/// Vector variant: one forward transform, a symbol per output component.
template <typename Sym>
inline void padded_apply_vec2(const Field2D& f, int c_in, Field2D& out, Sym&& sym) {
    auto ws = detail::freespace_for(f.grid());
    std::vector<cplx> buf, buf2;
    ws->pad_forward(f, c_in, buf);
    buf2 = buf;
    const int Nd = ws->doubled();
    for (int iy = 0; iy < Nd; ++iy)
        for (int ix = 0; ix < Nd; ++ix) {
            buf[static_cast<size_t>(iy) * Nd + ix] *= sym(*ws, 0, iy, ix);
            buf2[static_cast<size_t>(iy) * Nd + ix] *= sym(*ws, 1, iy, ix);
        }
    ws->extract_backward(buf, out, 0);
    ws->extract_backward(buf2, out, 1);
}

/// Free-space Newtonian potential (-Delta)^{-1} f via the truncated log kernel.
inline Field2D newtonian_potential(const Field2D& f, int c = 0) {
    Field2D out(f.grid(), 1);
    padded_apply(f, c, out, 0, [](const FreeSpaceWorkspace& ws, int iy, int ix) { return ws.khat_log(iy, ix); });
    return out;
}

/// Free-space grad(-Delta)^{-1} f (2-vector) via the truncated gradient
/// kernel -(1/2pi) xi/|xi|^2 (cell-averaged; the singular cell is zero by
/// antisymmetry).
inline Field2D freespace_biot_savart(const Field2D& f, int c = 0) {
    Field2D out(f.grid(), 2);
    padded_apply_vec2(f, c, out,
                      [](const FreeSpaceWorkspace& ws, int comp, int iy, int ix) { return ws.khat_grad(comp, iy, ix); });
    return out;
}

/// grad (lambda2 - Delta)^{-1} f: gradient kernel times the bounded screened
/// correction |k|^2/(lambda2+|k|^2). Degenerates to freespace_biot_savart at
/// lambda2 = 0; this is the velocity of a z-frequency slice.
inline Field2D screened_biot_savart(const Field2D& f, real lambda2, int c = 0) {
    Field2D out(f.grid(), 2);
    padded_apply_vec2(f, c, out, [lambda2](const FreeSpaceWorkspace& ws, int comp, int iy, int ix) {
        real kx = ws.wavenumber(ix), ky = ws.wavenumber(iy);
        real k2 = kx * kx + ky * ky;
        real factor = (lambda2 + k2 > 0.0) ? k2 / (lambda2 + k2) : 1.0;
        return ws.khat_grad(comp, iy, ix) * factor;
    });
    return out;
}

/// (lambda^2 - Delta)^{-1} f by spectral division on the doubled grid.
inline Field2D screened_resolvent_field(const Field2D& f, real lambda, int c = 0) {
    require(lambda > 0.0, "screened_resolvent: lambda must be positive");
    Field2D out(f.grid(), 1);
    const real l2 = lambda * lambda;
    padded_apply(f, c, out, 0, [l2](const FreeSpaceWorkspace& ws, int iy, int ix) {
        real kx = ws.wavenumber(ix), ky = ws.wavenumber(iy);
        return cplx(1.0 / (l2 + kx * kx + ky * ky), 0.0);
    });
    return out;
}

/// Screened potential (lambda^2-Delta)^{-1} f through the resolvent identity
/// K_log * |k|^2/(lambda^2+|k|^2); exact free-space Coulomb part, continuous
/// down to the Newtonian potential at lambda = 0.
inline Field2D screened_potential_freespace(const Field2D& f, real lambda2, int c = 0) {
    Field2D out(f.grid(), 1);
    padded_apply(f, c, out, 0, [lambda2](const FreeSpaceWorkspace& ws, int iy, int ix) {
        real kx = ws.wavenumber(ix), ky = ws.wavenumber(iy);
        real k2 = kx * kx + ky * ky;
        real factor = (lambda2 + k2 > 0.0) ? k2 / (lambda2 + k2) : 1.0;
        return ws.khat_log(iy, ix) * factor;
    });
    return out;
}

}  // namespace pks
