// Operator module: L on Gaussian eigenfunctions, Biot-Savart and screened
// resolvent against radial oracles, the linearization identity, and the
// Z perturbation with its split.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "pks/operators.hpp"

using namespace pks;

namespace {

struct Fixture {
    Grid2D g = make_grid(16.0, 256);
    RadialProfile prof = solve_profile(4.0 * PI, RadialGrid::uniform(16.0, 2048), 1e-10);
    OperatorContext ctx{g, prof, WeightSpec{3.0, 2.0}};
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

Field2D gaussian(const Grid2D& g, real cx = 0.0, real cy = 0.0, real w2 = 4.0, real amp = 1.0) {
    Field2D f(g, 1);
    f.fill(0, [=](real x, real y) -> cplx {
        return amp * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / w2);
    });
    return f;
}

real rel_err(const Field2D& a, const Field2D& b, const WeightSpec& w = {0.0, 2.0}) {
    Field2D d = a;
    d -= b;
    return weighted_norm(d, w) / (weighted_norm(b, w) + 1e-300);
}

}  // namespace

TEST_CASE("apply_L annihilates the Gaussian and shifts its derivative") {
    Grid2D g = make_grid(16.0, 256);
    Field2D f = gaussian(g);
    Field2D Lf = apply_L(f);
    CHECK(weighted_norm(Lf, {0.0, P_INF}) < 1e-6);

    // f = d1 e^{-|xi|^2/4} is an eigenfunction with eigenvalue -1/2
    Field2D df = derivative(f, 0, 0);
    Field2D Ldf = apply_L(df);
    Field2D expect = cplx(-0.5, 0.0) * df;
    CHECK(rel_err(Ldf, expect) < 1e-8);

    // finite-difference oracle for L on a generic smooth field
    Field2D gten = gaussian(g, 0.7, -0.4, 6.0);
    Field2D Lg = apply_L(gten);
    const real h = g.h;
    int iy = g.N / 2 + 5, ix = g.N / 2 - 7;
    auto at = [&](int dy, int dx) { return gten.at(0, iy + dy, ix + dx).real(); };
    real x = g.node(ix), y = g.node(iy);
    real lap4 = (-at(0, 2) + 16 * at(0, 1) - 30 * at(0, 0) + 16 * at(0, -1) - at(0, -2)) / (12 * h * h) +
                (-at(2, 0) + 16 * at(1, 0) - 30 * at(0, 0) + 16 * at(-1, 0) - at(-2, 0)) / (12 * h * h);
    real dx4 = (-at(0, 2) + 8 * at(0, 1) - 8 * at(0, -1) + at(0, -2)) / (12 * h);
    real dy4 = (-at(2, 0) + 8 * at(1, 0) - 8 * at(-1, 0) + at(-2, 0)) / (12 * h);
    real fd = lap4 + 0.5 * (x * dx4 + y * dy4) + at(0, 0);
    CHECK(Lg.at(0, iy, ix).real() == Catch::Approx(fd).margin(1e-4));

    // divergence form: quadrature integral vanishes for decaying f
    CHECK(std::abs(integral(Lg, 0)) < 1e-9);
}

TEST_CASE("biot_savart: zero input, profile velocity match, div identity, curl-free") {
    const auto& fx = fixture();
    Field2D zero(fx.g, 1);
    Field2D v0 = biot_savart(zero);
    CHECK(weighted_norm(v0, {0.0, P_INF}) == 0.0);

    // resampled G_alpha -> matches the radial flux-identity velocity
    CHECK(rel_err(fx.ctx.Vg, fx.ctx.Vg_radial) < 1e-3);

    // div v = -f pointwise to discretization error; the velocity carries
    // 1/r tails, so the check is local (4th-order differences, interior).
    Field2D f = gaussian(fx.g, 0.5, 0.0, 4.0, 2.0);
    Field2D v = biot_savart(f);
    const real h = fx.g.h;
    real worst_div = 0.0, worst_curl = 0.0;
    for (int iy = fx.g.N / 4; iy < 3 * fx.g.N / 4; ++iy) {
        for (int ix = fx.g.N / 4; ix < 3 * fx.g.N / 4; ++ix) {
            auto vx = [&](int dx) { return v.at(0, iy, ix + dx); };
            auto vy = [&](int dy) { return v.at(1, iy + dy, ix); };
            cplx div = (-vx(2) + 8.0 * vx(1) - 8.0 * vx(-1) + vx(-2)) / (12.0 * h) +
                       (-vy(2) + 8.0 * vy(1) - 8.0 * vy(-1) + vy(-2)) / (12.0 * h);
            worst_div = std::max(worst_div, std::abs(div + f.at(0, iy, ix)));
            auto wy = [&](int dy) { return v.at(0, iy + dy, ix); };
            auto wx = [&](int dx) { return v.at(1, iy, ix + dx); };
            cplx curl = (-wx(2) + 8.0 * wx(1) - 8.0 * wx(-1) + wx(-2)) / (12.0 * h) -
                        (-wy(2) + 8.0 * wy(1) - 8.0 * wy(-1) + wy(-2)) / (12.0 * h);
            worst_curl = std::max(worst_curl, std::abs(curl));
        }
    }
    CHECK(worst_div < 5e-3);   // second-order kernel quadrature at h = 0.125
    CHECK(worst_curl < 1e-5);  // gradient fields are curl-free
}

TEST_CASE("context invariants: drift scale and divergence defect") {
    const auto& fx = fixture();
    CHECK(fx.ctx.divergence_defect() < 1e-2);
    CHECK(fx.ctx.max_drift() > 0.1);
    CHECK(fx.ctx.max_drift() < 5.0);
}

TEST_CASE("screened resolvent: large-lambda limit, inverse consistency, Hankel oracle") {
    Grid2D g = make_grid(16.0, 256);
    Field2D f = gaussian(g);
    CHECK_THROWS_AS(screened_resolvent(f, 0.0), precondition_error);
    CHECK_THROWS_AS(screened_resolvent(f, -1.0), precondition_error);

    // lambda large: output ~ f / lambda^2
    for (real lam : {16.0, 32.0}) {
        Field2D u = screened_resolvent(f, lam);
        Field2D approx = cplx(1.0 / (lam * lam), 0.0) * f;
        CHECK(rel_err(u, approx) < 4.0 / (lam * lam));
    }

    // (lambda^2 - Delta) applied back returns f (interior nodes)
    Field2D u = screened_resolvent(f, 1.0);
    Field2D back = u - laplacian(u);
    real worst = 0.0;
    for (int iy = g.N / 4; iy < 3 * g.N / 4; ++iy)
        for (int ix = g.N / 4; ix < 3 * g.N / 4; ++ix)
            worst = std::max(worst, std::abs(back.at(0, iy, ix) - f.at(0, iy, ix)));
    CHECK(worst < 1e-8);

    // radial Hankel-quadrature oracle at lambda = 1: the Gaussian e^{-r^2/4}
    // has Hankel transform 2 e^{-k^2}, so u(r) = Int_0^inf 2e^{-k^2}/(1+k^2) J0(kr) k dk.
    auto oracle = [](real r) {
        real acc = 0.0;
        const int n = 6000;
        const real kmax = 14.0;
        for (int i = 0; i < n; ++i) {
            real k = (i + 0.5) * kmax / n;
            acc += 2.0 * std::exp(-k * k) / (1.0 + k * k) * std::cyl_bessel_j(0.0, k * r) * k * (kmax / n);
        }
        return acc;
    };
    for (int ix : {128 + 3, 128 + 9, 128 + 22, 128 + 39}) {
        real x = g.node(ix), y = g.node(g.N / 2);
        real val = u.at(0, g.N / 2, ix).real();
        REQUIRE(val == Catch::Approx(oracle(std::hypot(x, y))).margin(1e-4));
    }
}

TEST_CASE("lambda_alpha: zero input, integral annihilation, Frechet-derivative check") {
    const auto& fx = fixture();
    Field2D zero(fx.g, 1);
    CHECK(weighted_norm(apply_lambda_alpha(zero, fx.ctx), {0.0, P_INF}) == 0.0);

    Field2D f = gaussian(fx.g, 0.8, -0.3, 5.0);
    Field2D Lf = apply_lambda_alpha(f, fx.ctx);
    CHECK(std::abs(integral(Lf, 0)) < 1e-10);

    // directional derivative of T(w) = div(w grad(-Delta)^{-1} w) at G
    auto T = [&](const Field2D& w) {
        Field2D v = biot_savart(w);
        dealias_inplace(v);
        Field2D flux(fx.g, 2);
        Field2D p0 = product(w, 0, v, 0), p1 = product(w, 0, v, 1);
        std::copy(p0.plane(0), p0.plane(0) + p0.plane_size(), flux.plane(0));
        std::copy(p1.plane(0), p1.plane(0) + p1.plane_size(), flux.plane(1));
        return divergence_xi(flux);
    };
    Field2D fmask = f;
    dealias_inplace(fmask);
    Field2D TG = T(fx.ctx.G);
    real err_prev = 0.0;
    int step = 0;
    for (real eps : {1e-2, 1e-3}) {
        Field2D pert = fx.ctx.G;
        pert.axpy(eps, fmask);
        Field2D diff = T(pert) - TG;
        diff *= 1.0 / eps;
        diff -= apply_lambda_alpha(fmask, fx.ctx);
        real err = weighted_norm(diff, {0.0, 2.0});
        if (step++ > 0) CHECK(err < 0.15 * err_prev);  // first order in eps
        err_prev = err;
    }
}

TEST_CASE("operator linearity on random pairs") {
    const auto& fx = fixture();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<real> U(-1.0, 1.0);
    Field2D f1 = gaussian(fx.g, U(rng), U(rng), 3.0), f2 = gaussian(fx.g, U(rng), U(rng), 7.0);
    cplx a(U(rng), U(rng)), b(U(rng), U(rng));
    Field2D combo = a * f1;
    combo.axpy(b, f2);

    auto check_linear = [&](auto&& op) {
        Field2D lhs = op(combo);
        Field2D rhs = a * op(f1);
        rhs.axpy(b, op(f2));
        rhs -= lhs;
        REQUIRE(weighted_norm(rhs, {0.0, 2.0}) < 1e-10 * (1.0 + weighted_norm(lhs, {0.0, 2.0})));
    };
    check_linear([&](const Field2D& f) { return apply_L(f); });
    check_linear([&](const Field2D& f) { return apply_lambda_alpha(f, fx.ctx); });
    check_linear([&](const Field2D& f) { return apply_Z(f, 1.3, 0.4, fx.ctx); });
    check_linear([&](const Field2D& f) { return screened_resolvent(f, 2.0); });
}

TEST_CASE("Z perturbation: zero at zeta=0, split identity, bound sweep") {
    const auto& fx = fixture();
    Field2D W = gaussian(fx.g, 0.4, 0.6, 5.0);

    Field2D z0 = apply_Z(W, 0.0, 1.0, fx.ctx);
    CHECK(weighted_norm(z0, {0.0, P_INF}) == 0.0);

    // Z1 + Z2 = Z on varied fields and parameters
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<real> U(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        Field2D Wt = gaussian(fx.g, U(rng), U(rng), 2.0 + trial, 1.0 + trial);
        real zeta = 0.3 + 0.9 * trial, tau = U(rng);
        Field2D Z = apply_Z(Wt, zeta, tau, fx.ctx);
        auto [Z1, Z2] = split_Z(Wt, zeta, tau, fx.ctx);
        Field2D sum = Z1 + Z2;
        sum -= Z;
        REQUIRE(weighted_norm(sum, fx.ctx.weight) < 1e-8 * weighted_norm(Wt, fx.ctx.weight));
    }

    // Z does NOT annihilate the integral (the obstruction the Z1+Z2 split
    // exists for): Z1 is divergence-form so its integral vanishes exactly,
    // and the full integral of Z is carried by Z2.
    {
        Field2D Z = apply_Z(W, 1.0, 0.0, fx.ctx);
        auto [Z1, Z2] = split_Z(W, 1.0, 0.0, fx.ctx);
        CHECK(std::abs(integral(Z1, 0)) < 1e-12);
        CHECK(std::abs(integral(Z, 0)) > 1e-2);  // genuinely nonzero
        CHECK(std::abs(integral(Z, 0) - integral(Z2, 0)) < 1e-10 * std::abs(integral(Z2, 0)));
    }

    // bound || Z(W) || <= C |zeta|^{1/2} e^{tau/4} || W || with C stable
    real cmin = 1e300, cmax = 0.0;
    for (real zeta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        for (real tau : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            Field2D Zs = apply_Z(W, zeta, tau, fx.ctx);
            real C = weighted_norm(Zs, fx.ctx.weight) /
                     (std::sqrt(zeta) * std::exp(0.25 * tau) * weighted_norm(W, fx.ctx.weight));
            cmin = std::min(cmin, C);
            cmax = std::max(cmax, C);
        }
    }
    CHECK(cmax / cmin < 10.0);

    // Z2 obeys the same-shape bound
    real c2min = 1e300, c2max = 0.0;
    for (real zeta : {0.5, 1.0, 2.0}) {
        for (real tau : {-1.0, 0.0, 1.0}) {
            auto [Z1, Z2] = split_Z(W, zeta, tau, fx.ctx);
            (void)Z1;
            real C = weighted_norm(Z2, fx.ctx.weight) /
                     (std::sqrt(zeta) * std::exp(0.25 * tau) * weighted_norm(W, fx.ctx.weight));
            c2min = std::min(c2min, C);
            c2max = std::max(c2max, C);
        }
    }
    CHECK(c2max / c2min < 10.0);
}
