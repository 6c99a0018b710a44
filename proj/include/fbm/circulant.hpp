#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cov.hpp"
#include "fft.hpp"
#include "parallel.hpp"
#include "rng.hpp"

// Exact sampling of fractional Gaussian noise: embed the N x N Toeplitz
// covariance in a 2(N-1) circulant, diagonalize it with one FFT, and draw
// paths at the cost of two transforms each. A dense Cholesky sampler of the
// same law serves as the brute-force cross-check.

namespace fbm {

struct FgnSeries {
    std::vector<double> values; // one draw of the unit-spacing noise
    double spacing = 1.0;
    HurstParameter H;
};

struct FbmPath {
    std::vector<double> times;  // 0, dt, ..., N*dt
    std::vector<double> values; // values[0] == 0
    HurstParameter H;
};

struct CirculantEmbedding {
    HurstParameter H;
    std::size_t N = 0;          // samples per path
    std::size_t M = 0;          // embedding size, 2(N-1)
    std::vector<double> lambda; // circulant eigenvalues, all >= 0

    std::shared_ptr<const fft::Plan> plan;
    std::vector<double> sqrt_lambda;
};

inline CirculantEmbedding build_embedding(HurstParameter H, std::size_t N) {
    if (N < 2) throw std::invalid_argument("need at least two samples per path");
    const std::size_t M = 2 * (N - 1);
    std::vector<fft::cplx> c(M);
    c[0] = 1.0;
    for (std::size_t k = 1; k < N; ++k) c[k] = fgn_autocovariance(H, static_cast<long>(k));
    for (std::size_t k = N; k < M; ++k)
        c[k] = fgn_autocovariance(H, static_cast<long>(M - k));

    auto plan = std::make_shared<fft::Plan>(M);
    plan->forward(c);

    double max_lambda = 0.0;
    for (const auto& z : c) max_lambda = std::max(max_lambda, std::fabs(z.real()));
    double max_imag = 0.0;
    for (const auto& z : c) max_imag = std::max(max_imag, std::fabs(z.imag()));
    if (max_imag > 1e-8 * max_lambda)
        throw std::runtime_error("eigenvalues have non-negligible imaginary parts");

    CirculantEmbedding e{H, N, M, {}, std::move(plan), {}};
    e.lambda.resize(M);
    for (std::size_t k = 0; k < M; ++k) {
        double lk = c[k].real();
        if (lk < 0.0) {
            // theory says the spectrum is positive; tolerate rounding dust only
            if (lk < -1e-10 * max_lambda)
                throw std::runtime_error("embedding not nonnegative definite");
            lk = 0.0;
        }
        e.lambda[k] = lk;
    }
    e.sqrt_lambda.resize(M);
    for (std::size_t k = 0; k < M; ++k) e.sqrt_lambda[k] = std::sqrt(e.lambda[k]);
    return e;
}

// One path: zeta ~ N(0, I_M); take inverse DFT, scale by sqrt(lambda), take
// forward DFT, keep the real parts of the first N coordinates. The complex
// intermediate stays complex: the product of the three linear maps is the real
// symmetric square root of the circulant, so the imaginary part of the result
// is rounding noise (asserted below), not discarded signal.
//
// Draw-order contract: path index p consumes exactly M single Gaussians, in
// index order, from GaussianStream(seed, first_stream + p). This makes output
// independent of how paths are scheduled across workers.
inline FgnSeries sample_fgn_path(const CirculantEmbedding& e, std::uint64_t seed,
                                 std::uint64_t stream_index) {
    GaussianStream gs(seed, stream_index);
    std::vector<fft::cplx> buf(e.M);
    for (std::size_t j = 0; j < e.M; ++j) buf[j] = gs();
    e.plan->inverse(buf);
    for (std::size_t k = 0; k < e.M; ++k) buf[k] *= e.sqrt_lambda[k];
    e.plan->forward(buf);

    double max_abs = 0.0, max_imag = 0.0;
    for (std::size_t k = 0; k < e.N; ++k) {
        max_abs = std::max(max_abs, std::abs(buf[k]));
        max_imag = std::max(max_imag, std::fabs(buf[k].imag()));
    }
    if (max_imag > 1e-8 * std::max(max_abs, 1e-300))
        throw std::runtime_error("sampled vector is not numerically real");

    FgnSeries out{std::vector<double>(e.N), 1.0, e.H};
    for (std::size_t k = 0; k < e.N; ++k) out.values[k] = buf[k].real();
    return out;
}

inline std::vector<FgnSeries> sample_fgn(const CirculantEmbedding& e, std::uint64_t seed,
                                         std::size_t count, std::uint64_t first_stream = 0) {
    if (count < 1) throw std::invalid_argument("path count must be >= 1");
    std::vector<FgnSeries> out;
    out.reserve(count);
    for (std::size_t p = 0; p < count; ++p)
        out.push_back(sample_fgn_path(e, seed, first_stream + p));
    return out;
}

// same output as sample_fgn for any worker count: path p depends only on
// stream first_stream + p, and slots are preassigned
inline std::vector<FgnSeries> sample_fgn_parallel(const CirculantEmbedding& e,
                                                  std::uint64_t seed, std::size_t count,
                                                  unsigned workers,
                                                  std::uint64_t first_stream = 0) {
    if (count < 1) throw std::invalid_argument("path count must be >= 1");
    std::vector<FgnSeries> out(count, FgnSeries{{}, 1.0, e.H});
    parallel_for(count, workers, [&](std::size_t p) {
        out[p] = sample_fgn_path(e, seed, first_stream + p);
    });
    return out;
}

// scale to spacing T/N and accumulate, prepending B_0 = 0
inline FbmPath fgn_to_fbm(const FgnSeries& x, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("time horizon must be positive");
    const std::size_t N = x.values.size();
    const double dt = T / static_cast<double>(N);
    const double scale = std::pow(dt, x.H.value());
    FbmPath p{std::vector<double>(N + 1), std::vector<double>(N + 1), x.H};
    p.times[0] = 0.0;
    p.values[0] = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        p.times[k + 1] = dt * static_cast<double>(k + 1);
        p.values[k + 1] = p.values[k] + scale * x.values[k];
    }
    return p;
}

namespace detail {

// dense lower-triangular Cholesky, in place; throws if a pivot is nonpositive
inline void cholesky_factor(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) throw std::runtime_error("covariance not numerically positive definite");
        const double lj = std::sqrt(d);
        a[j * n + j] = lj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / lj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
    }
}

} // namespace detail

// Brute-force reference sampler: factor the exact Toeplitz covariance and
// multiply standard Gaussian vectors. Same law as sample_fgn, wildly slower;
// capped to keep the dense factorization honest.
class CholeskySampler {
public:
    CholeskySampler(HurstParameter H, std::size_t N) : H_(H), N_(N) {
        if (N < 1) throw std::invalid_argument("need at least one sample");
        if (N > 2048) throw std::invalid_argument("dense factorization capped at N = 2048");
        L_.assign(N * N, 0.0);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double v =
                    fgn_autocovariance(H, static_cast<long>(i) - static_cast<long>(j));
                L_[i * N + j] = v;
                L_[j * N + i] = v;
            }
        detail::cholesky_factor(L_, N);
    }

    FgnSeries sample_path(std::uint64_t seed, std::uint64_t stream_index) const {
        GaussianStream gs(seed, stream_index);
        std::vector<double> z(N_);
        for (auto& v : z) v = gs();
        FgnSeries out{std::vector<double>(N_, 0.0), 1.0, H_};
        for (std::size_t i = 0; i < N_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += L_[i * N_ + j] * z[j];
            out.values[i] = s;
        }
        return out;
    }

private:
    HurstParameter H_;
    std::size_t N_;
    std::vector<double> L_;
};

inline std::vector<FgnSeries> cholesky_sample_oracle(HurstParameter H, std::size_t N,
                                                     std::uint64_t seed, std::size_t count,
                                                     std::uint64_t first_stream = 0) {
    if (count < 1) throw std::invalid_argument("path count must be >= 1");
    CholeskySampler s(H, N);
    std::vector<FgnSeries> out;
    out.reserve(count);
    for (std::size_t p = 0; p < count; ++p)
        out.push_back(s.sample_path(seed, first_stream + p));
    return out;
}

} // namespace fbm
