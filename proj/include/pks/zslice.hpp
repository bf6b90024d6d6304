#pragma once

// z-Fourier side of the 3D fields: a symmetric zeta-grid of 2D slices (the
// discrete B_z structure), plus sampled Borel measures and the Morrey-type
// sup. The z-transform convention is fhat(zeta) = (2pi)^{-1/2} Int f e^{-i z zeta} dz.

#include <optional>

#include "pks/grid.hpp"

namespace pks {

/// Uniform symmetric frequency grid zeta_k = (k - (K-1)/2) * delta, K odd.
struct ZetaGrid {
    real delta = 0.25;
    int count = 1;  // odd

    static ZetaGrid symmetric(real zeta_max, real delta) {
        require(delta > 0.0, "ZetaGrid: delta must be positive");
        int half = static_cast<int>(std::llround(zeta_max / delta));
        ZetaGrid z;
        z.delta = delta;
        z.count = 2 * half + 1;
        return z;
    }

    int center() const { return (count - 1) / 2; }
    real zeta(int k) const { return (k - center()) * delta; }
    int mirror(int k) const { return count - 1 - k; }  // index of -zeta_k
    bool operator==(const ZetaGrid& o) const { return delta == o.delta && count == o.count; }
};

/// A finite family of 2D complex slices indexed by zeta_k. When `real_field`
/// is set the underlying physical field is real, slices at -zeta are the
/// conjugates of those at +zeta, and algorithms may compute only k >= center.
class ZSliceField {
  public:
    ZSliceField() = default;
    ZSliceField(const ZetaGrid& zg, const Grid2D& g, int components = 1, bool real_field = true)
        : zg_(zg), real_field_(real_field) {
        slices_.reserve(zg.count);
        for (int k = 0; k < zg.count; ++k) slices_.emplace_back(g, components);
    }

    const ZetaGrid& zgrid() const { return zg_; }
    const Grid2D& grid() const { return slices_.at(0).grid(); }
    int count() const { return zg_.count; }
    int components() const { return slices_.at(0).components(); }
    bool real_field() const { return real_field_; }
    void set_real_field(bool v) { real_field_ = v; }

    Field2D& slice(int k) { return slices_[k]; }
    const Field2D& slice(int k) const { return slices_[k]; }

    /// Overwrite slices below the center with conjugates of the mirrors.
    void enforce_conjugate_symmetry() {
        if (!real_field_) return;
        for (int k = 0; k < zg_.center(); ++k) {
            const Field2D& src = slices_[zg_.mirror(k)];
            Field2D& dst = slices_[k];
            for (size_t i = 0; i < dst.data().size(); ++i) dst.data()[i] = std::conj(src.data()[i]);
        }
    }

    real conjugate_symmetry_defect() const {
        real worst = 0.0;
        for (int k = 0; k < zg_.center(); ++k) {
            const Field2D& a = slices_[k];
            const Field2D& b = slices_[zg_.mirror(k)];
            for (size_t i = 0; i < a.data().size(); ++i)
                worst = std::max(worst, std::abs(a.data()[i] - std::conj(b.data()[i])));
        }
        return worst;
    }

    ZSliceField& operator+=(const ZSliceField& o) {
        for (int k = 0; k < count(); ++k) slices_[k] += o.slices_[k];
        return *this;
    }
    ZSliceField& operator-=(const ZSliceField& o) {
        for (int k = 0; k < count(); ++k) slices_[k] -= o.slices_[k];
        return *this;
    }
    ZSliceField& operator*=(cplx a) {
        for (auto& s : slices_) s *= a;
        return *this;
    }
    friend ZSliceField operator-(ZSliceField a, const ZSliceField& b) { return a -= b; }
    friend ZSliceField operator+(ZSliceField a, const ZSliceField& b) { return a += b; }

  private:
    ZetaGrid zg_;
    std::vector<Field2D> slices_;
    bool real_field_ = true;
};

/// || g ||_{B_z X} = Int || ghat(., zeta) ||_X dzeta, discretized as
/// delta * sum over the slice family.
inline real bz_norm(const ZSliceField& g, const WeightSpec& w = {}) {
    real acc = 0.0;
    for (int k = 0; k < g.count(); ++k) acc += weighted_norm(g.slice(k), w);
    return g.zgrid().delta * acc;
}

/// Pointwise-in-x product of two slice families (product in z becomes a
/// zeta-convolution): (fg)^(zeta_k) = (2pi)^{-1/2} delta * sum_j fhat_j ghat_{k-j}.
/// Components: scalar * scalar -> scalar, or scalar f times vector g.
inline ZSliceField zconvolve(const ZSliceField& f, const ZSliceField& g) {
    require(f.zgrid() == g.zgrid(), "zconvolve: zeta grids differ");
    require(f.components() == 1, "zconvolve: first factor must be scalar");
    const ZetaGrid& zg = f.zgrid();
    const int K = zg.count, C = zg.center();
    ZSliceField out(zg, f.grid(), g.components(), f.real_field() && g.real_field());
    const real w = zg.delta / std::sqrt(TWO_PI);
    const size_t plane = f.slice(0).plane_size();
    const int kmax = out.real_field() ? K : K;  // fill all, mirror below
    const int kstart = out.real_field() ? C : 0;
    for (int k = kstart; k < kmax; ++k) {
        Field2D& dst = out.slice(k);
        for (int j = 0; j < K; ++j) {
            int l = (k - j) + C;  // index of zeta_k - zeta_j
            if (l < 0 || l >= K) continue;
            const cplx* pf = f.slice(j).plane(0);
            for (int c = 0; c < g.components(); ++c) {
                const cplx* pg = g.slice(l).plane(c);
                cplx* pd = dst.plane(c);
                for (size_t i = 0; i < plane; ++i) pd[i] += w * pf[i] * pg[i];
            }
        }
    }
    if (out.real_field()) out.enforce_conjugate_symmetry();
    return out;
}

/// Multiply every slice by the same zeta-independent 2D scalar field
/// (the z-independent-factor special case of the product).
inline ZSliceField zscale_by_field(const Field2D& a, const ZSliceField& g) {
    ZSliceField out(g.zgrid(), g.grid(), g.components(), g.real_field());
    const size_t plane = a.plane_size();
    for (int k = 0; k < g.count(); ++k) {
        for (int c = 0; c < g.components(); ++c) {
            const cplx* pa = a.plane(0);
            const cplx* pg = g.slice(k).plane(c);
            cplx* pd = out.slice(k).plane(c);
            for (size_t i = 0; i < plane; ++i) pd[i] = pa[i] * pg[i];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampled Borel measures and the Morrey-type sup
// ---------------------------------------------------------------------------

struct Atom3 {
    real x = 0, y = 0, z = 0;
    real weight = 0;
};

/// Infinite straight line with constant mass-per-length.
struct LineDescriptor {
    real px = 0, py = 0, pz = 0;  // point on the line
    real dx = 0, dy = 0, dz = 1;  // unit direction
    real density = 0;             // alpha per unit length
};

struct MeasureSample {
    std::vector<Atom3> atoms;
    std::optional<LineDescriptor> line;
};

struct MorreyResult {
    real value = 0.0;   // certified lower bound of sup r^{-1} |mu(B(y,r))|
    bool diverged = false;
    real r_at_max = 0.0;
};

struct MorreyParams {
    real r_min = 0.0;  // 0: derive from data
    int levels = 18;   // dyadic radii r_min * 2^j
};

/// Dyadic-scan approximation of sup_{r,y} r^{-1} |mu(B(y,r))|: radii
/// 2^j r_min, centers at the atoms (plus the line axis when present).
/// Lower-bound semantics; the flag reports point-mass style blow-up of the
/// ratio as r decreases to r_min.
inline MorreyResult morrey_norm(const MeasureSample& mu, MorreyParams prm = {}) {
    MorreyResult res;
    std::vector<real> ratio_at_level;

    if (mu.line) {
        // Ball of radius r centered at distance d from the line carries
        // 2 sqrt(r^2-d^2) * density; the sup over d is at d = 0, giving the
        // scale-free ratio 2 * density.
        res.value = 2.0 * std::abs(mu.line->density);
        res.r_at_max = 1.0;
    }
    if (mu.atoms.empty()) return res;

    for (const auto& a : mu.atoms) require(std::isfinite(a.weight), "morrey_norm: non-finite weight");

    // Derive scan scales from the data.
    real dmax = 0.0, dmin_nb = std::numeric_limits<real>::infinity();
    const size_t n = mu.atoms.size();
    const size_t cap = std::min<size_t>(n, 512);  // center scan cap
    for (size_t i = 0; i < n; ++i) {
        real best = std::numeric_limits<real>::infinity();
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            real ddx = mu.atoms[i].x - mu.atoms[j].x, ddy = mu.atoms[i].y - mu.atoms[j].y,
                 ddz = mu.atoms[i].z - mu.atoms[j].z;
            real d = std::sqrt(ddx * ddx + ddy * ddy + ddz * ddz);
            best = std::min(best, d);
            dmax = std::max(dmax, d);
        }
        if (n > 1) dmin_nb = std::min(dmin_nb, best);
        if (n > 4096 && i > 4096) break;  // scale guard for huge samples
    }
    real r_min = prm.r_min;
    if (r_min <= 0.0) r_min = (n > 1 && std::isfinite(dmin_nb) && dmin_nb > 0) ? dmin_nb : 1e-3;
    real r_top = std::max(2.0 * dmax, r_min * std::ldexp(1.0, prm.levels - 1));

    size_t stride = (n + cap - 1) / cap;
    for (int lev = 0; lev < prm.levels; ++lev) {
        real r = r_min * std::ldexp(1.0, lev);
        if (r > 2.0 * r_top) break;
        real best = 0.0;
        for (size_t ci = 0; ci < n; ci += stride) {
            const auto& c = mu.atoms[ci];
            real mass = 0.0;
            for (const auto& a : mu.atoms) {
                real ddx = a.x - c.x, ddy = a.y - c.y, ddz = a.z - c.z;
                if (ddx * ddx + ddy * ddy + ddz * ddz <= r * r) mass += a.weight;
            }
            best = std::max(best, std::abs(mass) / r);
        }
        ratio_at_level.push_back(best);
        if (best > res.value) {
            res.value = best;
            res.r_at_max = r;
        }
    }

    // Point-mass style divergence: the ratio at the smallest radius tops the
    // scan and keeps near-doubling per halving.
    if (ratio_at_level.size() >= 2 && res.r_at_max == r_min &&
        ratio_at_level[0] >= 1.8 * ratio_at_level[1]) {
        res.diverged = true;
    }
    return res;
}

}  // namespace pks
