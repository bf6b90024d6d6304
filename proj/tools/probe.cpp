// Scratch numerics probe (not installed); used during development to pin
// realistic tolerances before freezing them into tests.
#include <cstdio>

#include "pks/operators.hpp"

using namespace pks;

int main() {
    Grid2D g = make_grid(16.0, 256);
    RadialProfile prof = solve_profile(4.0 * PI, RadialGrid::uniform(16.0, 2048), 1e-10);
    OperatorContext ctx(g, prof, {3.0, 2.0});

    // Vg vs radial velocity
    {
        Field2D d = ctx.Vg;
        d -= ctx.Vg_radial;
        std::printf("Vg vs radial: rel L2 = %.3e\n",
                    weighted_norm(d, {0.0, 2.0}) / weighted_norm(ctx.Vg_radial, {0.0, 2.0}));
    }
    std::printf("div defect (sup rel): %.3e\n", ctx.divergence_defect());

    // div v = -f on a Gaussian
    Field2D f(g, 1);
    f.fill(0, [](real x, real y) -> cplx { return 2.0 * std::exp(-((x - 0.5) * (x - 0.5) + y * y) / 4.0); });
    Field2D v = freespace_biot_savart(f);
    Field2D dv = divergence_xi(v);
    Field2D neg = cplx(-1.0, 0.0) * f;
    {
        Field2D d = dv;
        d -= neg;
        std::printf("div v + f:   rel L2 = %.3e\n", weighted_norm(d, {0.0, 2.0}) / weighted_norm(f, {0.0, 2.0}));
        real worst = 0.0;
        for (int iy = g.N / 4; iy < 3 * g.N / 4; ++iy)
            for (int ix = g.N / 4; ix < 3 * g.N / 4; ++ix)
                worst = std::max(worst, std::abs(dv.at(0, iy, ix) + f.at(0, iy, ix)));
        std::printf("div v + f:   interior sup = %.3e\n", worst);
    }
    Field2D curl = derivative(v, 1, 0) - derivative(v, 0, 1);
    std::printf("curl:        rel sup = %.3e\n",
                weighted_norm(curl, {0.0, P_INF}) / weighted_norm(v, {0.0, P_INF}));

    // resolution study for div defect
    for (int N : {128, 256, 512}) {
        Grid2D gg = make_grid(16.0, N);
        Field2D ff(gg, 1);
        ff.fill(0, [](real x, real y) -> cplx { return 2.0 * std::exp(-((x - 0.5) * (x - 0.5) + y * y) / 4.0); });
        Field2D vv = freespace_biot_savart(ff);
        Field2D dd = divergence_xi(vv);
        Field2D dneg = dd + ff;
        std::printf("N=%4d div defect rel L2 = %.3e\n", N,
                    weighted_norm(dneg, {0.0, 2.0}) / weighted_norm(ff, {0.0, 2.0}));
    }
    return 0;
}
