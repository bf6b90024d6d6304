#pragma once

// Field-level spectral operations on the periodic truncation: transforms,
// derivatives, heat flow, the 2/3 dealiasing mask, and scaled resampling
// (the dilation that realizes the drift part of the Fokker-Planck kernel).

#include "pks/fft.hpp"
#include "pks/grid.hpp"

namespace pks {

/// Forward 2D DFT of one component into `spec` (unnormalized FFTW layout).
inline void to_spectrum(const Field2D& f, int c, std::vector<cplx>& spec) {
    spec.assign(f.plane(c), f.plane(c) + f.plane_size());
    fft2(spec.data(), f.n(), f.n(), FFTW_FORWARD);
}

inline void from_spectrum(std::vector<cplx>& spec, Field2D& f, int c) {
    fft2(spec.data(), f.n(), f.n(), FFTW_BACKWARD);
    const real inv = 1.0 / (static_cast<real>(f.n()) * f.n());
    cplx* p = f.plane(c);
    for (size_t i = 0; i < f.plane_size(); ++i) p[i] = spec[i] * inv;
}

/// Apply a spectral symbol s(kx, ky) to every component in place.
template <typename Symbol>
inline void apply_symbol(Field2D& f, Symbol&& s) {
    const Grid2D& g = f.grid();
    std::vector<cplx> spec;
    for (int c = 0; c < f.components(); ++c) {
        to_spectrum(f, c, spec);
        for (int iy = 0; iy < g.N; ++iy) {
            real ky = g.wavenumber(iy);
            for (int ix = 0; ix < g.N; ++ix) spec[static_cast<size_t>(iy) * g.N + ix] *= s(g.wavenumber(ix), ky);
        }
        from_spectrum(spec, f, c);
    }
}

/// Spectral round trip (forward + inverse); used by the Parseval test.
inline Field2D spectral_roundtrip(const Field2D& f) {
    Field2D out = f;
    apply_symbol(out, [](real, real) { return cplx(1.0, 0.0); });
    return out;
}

inline Field2D derivative(const Field2D& f, int c, int dim) {
    Field2D out(f.grid(), 1);
    std::vector<cplx> spec;
    to_spectrum(f, c, spec);
    const Grid2D& g = f.grid();
    for (int iy = 0; iy < g.N; ++iy) {
        real ky = g.wavenumber(iy);
        for (int ix = 0; ix < g.N; ++ix) {
            real k = (dim == 0) ? g.wavenumber(ix) : ky;
            spec[static_cast<size_t>(iy) * g.N + ix] *= cplx(0.0, k);
        }
    }
    from_spectrum(spec, out, 0);
    return out;
}

/// Gradient of a scalar component as a 2-vector field.
inline Field2D gradient(const Field2D& f, int c = 0) {
    Field2D out(f.grid(), 2);
    Field2D dx = derivative(f, c, 0), dy = derivative(f, c, 1);
    std::copy(dx.plane(0), dx.plane(0) + f.plane_size(), out.plane(0));
    std::copy(dy.plane(0), dy.plane(0) + f.plane_size(), out.plane(1));
    return out;
}

/// xi-divergence of the first two components.
inline Field2D divergence_xi(const Field2D& v) {
    require(v.components() >= 2, "divergence_xi: needs a vector field");
    Field2D dx = derivative(v, 0, 0), dy = derivative(v, 1, 1);
    return dx + dy;
}

inline Field2D laplacian(const Field2D& f) {
    Field2D out = f;
    apply_symbol(out, [](real kx, real ky) { return cplx(-(kx * kx + ky * ky), 0.0); });
    return out;
}

/// Exact heat flow exp(a*Laplacian) on the periodic truncation.
inline void heat_flow_inplace(Field2D& f, real a) {
    if (a == 0.0) return;
    apply_symbol(f, [a](real kx, real ky) { return cplx(std::exp(-a * (kx * kx + ky * ky)), 0.0); });
}

/// 2/3-rule dealiasing mask, applied after pointwise products. Keeps
/// |m~| < N/3 per dimension (strict), so products of two masked fields are
/// alias-free on the kept band.
inline void dealias_inplace(Field2D& f) {
    const Grid2D& g = f.grid();
    const int cut = g.N / 3;
    std::vector<cplx> spec;
    for (int c = 0; c < f.components(); ++c) {
        to_spectrum(f, c, spec);
        for (int iy = 0; iy < g.N; ++iy) {
            int my = std::abs(signed_mode(iy, g.N));
            for (int ix = 0; ix < g.N; ++ix) {
                int mx = std::abs(signed_mode(ix, g.N));
                if (mx >= cut || my >= cut) spec[static_cast<size_t>(iy) * g.N + ix] = cplx(0.0, 0.0);
            }
        }
        from_spectrum(spec, f, c);
    }
}

/// Pointwise product of scalar components, dealiased.
inline Field2D product(const Field2D& a, int ca, const Field2D& b, int cb) {
    Field2D out(a.grid(), 1);
    const cplx* pa = a.plane(ca);
    const cplx* pb = b.plane(cb);
    cplx* po = out.plane(0);
    for (size_t i = 0; i < a.plane_size(); ++i) po[i] = pa[i] * pb[i];
    dealias_inplace(out);
    return out;
}

/// Evaluate the trig interpolant of every component at rho*xi and scale by
/// `amplitude`; nodes leaving the domain evaluate to zero.
inline void resample_scaled_inplace(Field2D& f, real rho, real amplitude) {
    for (int c = 0; c < f.components(); ++c) resample_scaled_2d(f.plane(c), f.n(), rho, amplitude);
}

/// One exact Fokker-Planck step: e^{tau L} = heat(a(tau)) o dilate, where
/// dilate f (xi) = e^{tau} f(e^{tau/2} xi) preserves mass. Band limits are
/// maintained by the caller keeping tau <= ~0.5 per call.
inline void fokker_planck_exact_step(Field2D& f, real tau) {
    if (tau == 0.0) return;
    resample_scaled_inplace(f, std::exp(0.5 * tau), std::exp(tau));
    heat_flow_inplace(f, a_of_tau(tau));
}

}  // namespace pks
