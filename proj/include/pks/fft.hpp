#pragma once

// Low-level discrete transforms: cached FFTW plans, 2D transforms on
// row-major complex arrays, and the chirp-z (Bluestein) evaluation of a
// trigonometric interpolant at uniformly scaled nodes. Everything here is
// convention-free: grid semantics (cell centering, wavenumbers) live in
// spectral.hpp.

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "pks/common.hpp"

namespace pks {

namespace detail {

/// Process-wide FFTW plan cache. Plans are created with FFTW_ESTIMATE and
/// FFTW_UNALIGNED so they can execute on any caller buffer via the
/// new-array interface; creation is serialized, execution is thread-safe.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan plan2d(int n0, int n1, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(n0, n1, sign);
        auto it = plans2d_.find(key);
        if (it != plans2d_.end()) return it->second;
        std::vector<cplx> probe(static_cast<size_t>(n0) * n1);
        auto* p = reinterpret_cast<fftw_complex*>(probe.data());
        fftw_plan plan = fftw_plan_dft_2d(n0, n1, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans2d_.emplace(key, plan);
        return plan;
    }

    fftw_plan plan1d(int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans1d_.find(key);
        if (it != plans1d_.end()) return it->second;
        std::vector<cplx> probe(static_cast<size_t>(n));
        auto* p = reinterpret_cast<fftw_complex*>(probe.data());
        fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans1d_.emplace(key, plan);
        return plan;
    }

  private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans2d_;
    std::map<std::pair<int, int>, fftw_plan> plans1d_;
};

inline void exec(fftw_plan plan, cplx* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

}  // namespace detail

/// In-place 2D DFT, row-major data[n0][n1]. sign=FFTW_FORWARD (-1) or
/// FFTW_BACKWARD (+1); backward is unnormalized (caller divides by n0*n1).
inline void fft2(cplx* data, int n0, int n1, int sign) {
    detail::exec(detail::PlanCache::instance().plan2d(n0, n1, sign), data);
}

inline void fft1(cplx* data, int n, int sign) {
    detail::exec(detail::PlanCache::instance().plan1d(n, sign), data);
}

/// Signed FFT index: m in [0,N) -> m~ in [-N/2, N/2).
inline int signed_mode(int m, int N) { return (m < N / 2) ? m : m - N; }

/// Chirp-z resampling of a 1D trigonometric interpolant on the cell-centered
/// grid xi_j = (j+1/2)h - R onto the scaled nodes rho*xi_j. Out-of-domain
/// nodes (|rho*xi_j| > R) evaluate to zero: fields in this code decay, so
/// the periodic wrap value would be spurious.
///
/// Tables are precomputed per (N, rho); the per-line work is one FFT(N) and
/// an FFT(2N) pair.
class ChirpResampler {
  public:
    ChirpResampler(int N, real rho) : N_(N), L_(2 * N), rho_(rho) {
        const real theta = TWO_PI * rho / N;
        const real c0 = 0.5 - 0.5 * N;
        // a-twiddle: conj(phase_m)/N * w^{m~^2/2} folded together, where
        // phase_m = exp(i pi m~ (1/N - 1)) maps FFT outputs to interpolant
        // coefficients on the cell-centered grid.
        a_tw_.resize(N);
        for (int m = 0; m < N; ++m) {
            int mt = signed_mode(m, N);
            real ph = -PI * mt * (1.0 / N - 1.0) + 0.5 * theta * mt * mt;
            a_tw_[m] = std::polar(1.0 / N, std::remainder(ph, TWO_PI));
        }
        // b-array: w^{-(l+c0)^2/2} for l in [1-N/2, 3N/2-1], stored at
        // index l + N/2 - 1, then transformed once.
        bhat_.assign(L_, cplx(0.0, 0.0));
        for (int l = 1 - N / 2; l <= 3 * N / 2 - 1; ++l) {
            real x = l + c0;
            bhat_[l + N / 2 - 1] = std::polar(1.0, std::remainder(-0.5 * theta * x * x, TWO_PI));
        }
        fft1(bhat_.data(), L_, FFTW_FORWARD);
        // output twiddle w^{(j+c0)^2/2}, with the out-of-domain mask.
        out_tw_.resize(N);
        mask_.resize(N);
        const real h = 1.0;  // mask uses index form: |rho*(j+c0)| <= N/2
        (void)h;
        for (int j = 0; j < N; ++j) {
            real x = j + c0;
            out_tw_[j] = std::polar(1.0, std::remainder(0.5 * theta * x * x, TWO_PI));
            mask_[j] = std::abs(rho * x) <= 0.5 * N;
        }
    }

    int size() const { return N_; }
    real rho() const { return rho_; }

    /// Resample one line of N samples (stride-1) in place of `out`.
    /// `work` must hold 2N entries. `line` may alias `out`.
    void apply(const cplx* line, cplx* out, cplx* work) const {
        std::vector<cplx> spec(line, line + N_);
        fft1(spec.data(), N_, FFTW_FORWARD);
        for (int i = 0; i < L_; ++i) work[i] = cplx(0.0, 0.0);
        for (int m = 0; m < N_; ++m) {
            int mt = signed_mode(m, N_);
            work[mt + N_ / 2] = spec[m] * a_tw_[m];
        }
        fft1(work, L_, FFTW_FORWARD);
        for (int i = 0; i < L_; ++i) work[i] *= bhat_[i];
        fft1(work, L_, FFTW_BACKWARD);
        const real inv = 1.0 / L_;
        for (int j = 0; j < N_; ++j) {
            if (!mask_[j]) {
                out[j] = cplx(0.0, 0.0);
                continue;
            }
            out[j] = out_tw_[j] * work[(j + N_ - 1) % L_] * inv;
        }
    }

  private:
    int N_, L_;
    real rho_;
    std::vector<cplx> a_tw_, bhat_, out_tw_;
    std::vector<char> mask_;
};

namespace detail {

/// Cache of chirp resamplers keyed by (N, quantized rho).
inline const ChirpResampler& chirp_for(int N, real rho) {
    static std::mutex mu;
    static std::map<std::pair<int, long long>, ChirpResampler> cache;
    // rho enters only through trig tables; quantize at 1e-14 relative.
    long long q = static_cast<long long>(std::llround(rho * 1e14));
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(N, q);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, ChirpResampler(N, rho)).first;
    return it->second;
}

}  // namespace detail

/// Evaluate the 2D trigonometric interpolant of `data` (row-major N x N,
/// cell-centered) at nodes (rho*xi_i, rho*xi_j), times `amplitude`.
inline void resample_scaled_2d(cplx* data, int N, real rho, real amplitude) {
    const ChirpResampler& ch = detail::chirp_for(N, rho);
    std::vector<cplx> work(2 * N), line(N);
    // x-pass (contiguous rows)
    for (int iy = 0; iy < N; ++iy) ch.apply(data + static_cast<size_t>(iy) * N, data + static_cast<size_t>(iy) * N, work.data());
    // y-pass (strided columns)
    for (int ix = 0; ix < N; ++ix) {
        for (int iy = 0; iy < N; ++iy) line[iy] = data[static_cast<size_t>(iy) * N + ix];
        ch.apply(line.data(), line.data(), work.data());
        for (int iy = 0; iy < N; ++iy) data[static_cast<size_t>(iy) * N + ix] = amplitude * line[iy];
    }
}

}  // namespace pks
