#pragma once

// The 2D linear operators of the core analysis: the Fokker-Planck generator
// L = Delta + xi.grad/2 + 1, the linearization Lambda_alpha of the transport
// term at G_alpha, the screened/free-space inverses behind them, and the
// z-frequency perturbation Z(W) with its divergence-form + local split.

#include "pks/freespace.hpp"
#include "pks/profile.hpp"

namespace pks {

/// Immutable per-(grid, profile, weight) context shared by the operators and
/// propagators. Fields are band-limited (2/3 mask) once at construction so
/// the product-rule identities below hold exactly in the discrete algebra.
struct OperatorContext {
    Grid2D grid;
    RadialProfile profile;
    WeightSpec weight;

    Field2D G;         // resampled density, masked
    Field2D gradG;     // spectral gradient of G (2-vector)
    Field2D Vg;        // discrete free-space grad(-Delta)^{-1} G, masked
    Field2D Vg_radial; // velocity from the radial flux identity (reference)

    OperatorContext(const Grid2D& g, const RadialProfile& p, const WeightSpec& w = {})
        : grid(g), profile(p), weight(w) {
        G = profile_density_field(p, g);
        dealias_inplace(G);
        gradG = gradient(G, 0);
        Vg = freespace_biot_savart(G, 0);
        Vg_radial = profile_velocity_field(p, g);
    }

    /// max |V^G| over nodes; the advective CFL scale.
    real max_drift() const {
        real m = 0.0;
        for (size_t i = 0; i < Vg.plane_size(); ++i)
            m = std::max(m, std::hypot(std::abs(Vg.plane(0)[i]), std::abs(Vg.plane(1)[i])));
        return m;
    }

    /// Pointwise defect of div V^G = -G_alpha over the interior (|xi| <= R/2),
    /// relative sup. Local 4th-order differences: the velocity has 1/r tails,
    /// so a periodic spectral divergence would ring at the wrap.
    real divergence_defect() const {
        real worst = 0.0, scale = 0.0;
        const int N = grid.N;
        const real h = grid.h;
        for (int iy = N / 4; iy < 3 * N / 4; ++iy) {
            for (int ix = N / 4; ix < 3 * N / 4; ++ix) {
                auto vx = [&](int dx) { return Vg.at(0, iy, ix + dx); };
                auto vy = [&](int dy) { return Vg.at(1, iy + dy, ix); };
                cplx div = (-vx(2) + 8.0 * vx(1) - 8.0 * vx(-1) + vx(-2)) / (12.0 * h) +
                           (-vy(2) + 8.0 * vy(1) - 8.0 * vy(-1) + vy(-2)) / (12.0 * h);
                worst = std::max(worst, std::abs(div + G.at(0, iy, ix)));
                scale = std::max(scale, std::abs(G.at(0, iy, ix)));
            }
        }
        return worst / scale;
    }
};

/// xi . grad f, pointwise in xi (spectral gradient, exact node values).
inline Field2D xi_dot_grad(const Field2D& f, int c = 0) {
    const Grid2D& g = f.grid();
    Field2D dx = derivative(f, c, 0), dy = derivative(f, c, 1);
    Field2D out(g, 1);
    for (int iy = 0; iy < g.N; ++iy) {
        real y = g.node(iy);
        for (int ix = 0; ix < g.N; ++ix)
            out.at(0, iy, ix) = g.node(ix) * dx.at(0, iy, ix) + y * dy.at(0, iy, ix);
    }
    return out;
}

/// L f = Delta f + (1/2) xi . grad f + f.
inline Field2D apply_L(const Field2D& f) {
    require(f.components() == 1, "apply_L: scalar fields only");
    Field2D out = laplacian(f);
    Field2D drift = xi_dot_grad(f);
    out.axpy(0.5, drift);
    out += f;
    return out;
}

/// Free-space grad(-Delta)^{-1} f: attractive velocity field of a density.
inline Field2D biot_savart(const Field2D& f, int c = 0) { return freespace_biot_savart(f, c); }

/// (lambda^2 - Delta)^{-1} f on the doubled grid; rejects lambda <= 0.
inline Field2D screened_resolvent(const Field2D& f, real lambda) { return screened_resolvent_field(f, lambda); }

/// Lambda_alpha f = div(f V^G) + div(G grad (-Delta)^{-1} f): the transport
/// linearization at G_alpha in pure divergence form (discrete quadrature
/// integral is exactly zero). The velocity of f uses the same discrete
/// Biot-Savart as the nonlinear transport, so this is exactly the Frechet
/// derivative of the discrete map w -> div(w grad(-Delta)^{-1} w) at G.
inline Field2D apply_lambda_alpha(const Field2D& f, const OperatorContext& ctx) {
    Field2D flux(ctx.grid, 2);
    // f V^G
    {
        Field2D p0 = product(f, 0, ctx.Vg, 0);
        Field2D p1 = product(f, 0, ctx.Vg, 1);
        std::copy(p0.plane(0), p0.plane(0) + p0.plane_size(), flux.plane(0));
        std::copy(p1.plane(0), p1.plane(0) + p1.plane_size(), flux.plane(1));
    }
    // + G v_f with v_f = grad(-Delta)^{-1} f
    Field2D vf = freespace_biot_savart(f);
    dealias_inplace(vf);
    {
        Field2D p0 = product(ctx.G, 0, vf, 0);
        Field2D p1 = product(ctx.G, 0, vf, 1);
        for (size_t i = 0; i < flux.plane_size(); ++i) {
            flux.plane(0)[i] += p0.plane(0)[i];
            flux.plane(1)[i] += p1.plane(0)[i];
        }
    }
    return divergence_xi(flux);
}

/// The resolvent-difference potential behind Z:
///   phi = e^tau zeta^2 (-Delta)^{-1} (-Delta + e^tau zeta^2)^{-1} W,
/// masked to the product band.
inline Field2D z_potential(const Field2D& W, real zeta, real tau) {
    const real l2 = std::exp(tau) * zeta * zeta;
    Field2D phi(W.grid(), 1);
    padded_apply(W, 0, phi, 0, [l2](const FreeSpaceWorkspace& ws, int iy, int ix) {
        real kx = ws.wavenumber(ix), ky = ws.wavenumber(iy);
        real k2 = kx * kx + ky * ky;
        return ws.khat_log(iy, ix) * (l2 / (l2 + k2));
    });
    dealias_inplace(phi);
    return phi;
}

/// Z(W) = grad G . grad phi with the potential above; identically zero at
/// zeta = 0 where the two resolvents coincide.
inline Field2D apply_Z(const Field2D& W, real zeta, real tau, const OperatorContext& ctx) {
    if (zeta == 0.0) return Field2D(W.grid(), 1);
    Field2D phi = z_potential(W, zeta, tau);
    Field2D gphi = gradient(phi, 0);
    Field2D out = product(ctx.gradG, 0, gphi, 0);
    out += product(ctx.gradG, 1, gphi, 1);
    return out;
}

/// Z = Z1 + Z2 split: Z1 = div(G grad phi) (divergence form), Z2 = -G
/// Laplacian phi (= G e^tau zeta^2 (-Delta+e^tau zeta^2)^{-1} W in the
/// continuum). All three pieces are built from one masked potential, so the
/// identity Z1 + Z2 = Z holds to rounding.
inline std::pair<Field2D, Field2D> split_Z(const Field2D& W, real zeta, real tau, const OperatorContext& ctx) {
    if (zeta == 0.0) return {Field2D(W.grid(), 1), Field2D(W.grid(), 1)};
    Field2D phi = z_potential(W, zeta, tau);
    Field2D gphi = gradient(phi, 0);
    Field2D flux(ctx.grid, 2);
    Field2D p0 = product(ctx.G, 0, gphi, 0);
    Field2D p1 = product(ctx.G, 0, gphi, 1);
    std::copy(p0.plane(0), p0.plane(0) + p0.plane_size(), flux.plane(0));
    std::copy(p1.plane(0), p1.plane(0) + p1.plane_size(), flux.plane(1));
    Field2D Z1 = divergence_xi(flux);
    Field2D lap = laplacian(phi);
    Field2D Z2 = product(ctx.G, 0, lap, 0);
    Z2 *= -1.0;
    return {Z1, Z2};
}

}  // namespace pks
