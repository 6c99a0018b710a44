#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

// Complex DFT with a fixed convention:
//   forward  X_k = sum_j x_j exp(-2*pi*i*j*k/n)
//   inverse  x_j = (1/n) sum_k X_k exp(+2*pi*i*j*k/n)
// Power-of-two sizes run the iterative radix-2 kernel; everything else goes
// through Bluestein's chirp-z reduction to a padded power-of-two transform.

namespace fbm::fft {

using cplx = std::complex<double>;

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

class Radix2 {
public:
    explicit Radix2(std::size_t n) : n_(n) {
        if (n == 0 || (n & (n - 1)) != 0)
            throw std::invalid_argument("radix-2 size must be a power of two");
        rev_.resize(n);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n) ++log2n;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        const double step = -6.283185307179586476925287 / static_cast<double>(n);
        for (std::size_t k = 0; k < n / 2; ++k) {
            double a = step * static_cast<double>(k);
            tw_[k] = {std::cos(a), std::sin(a)};
        }
    }

    std::size_t size() const noexcept { return n_; }

    void forward(cplx* x) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (rev_[i] > i) std::swap(x[i], x[rev_[i]]);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t stride = n_ / len;
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const cplx w = tw_[k * stride];
                    const cplx u = x[base + k];
                    const cplx v = x[base + k + half] * w;
                    x[base + k] = u + v;
                    x[base + k + half] = u - v;
                }
            }
        }
    }

private:
    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<cplx> tw_;
};

} // namespace detail

class Plan {
public:
    explicit Plan(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("transform size must be positive");
        if ((n & (n - 1)) == 0) {
            base_ = std::make_unique<detail::Radix2>(n);
            return;
        }
        const std::size_t L = next_pow2(2 * n - 1);
        base_ = std::make_unique<detail::Radix2>(L);
        chirp_.resize(n);
        // a_j = exp(-i*pi*j^2/n); reduce j^2 mod 2n so the angle stays small
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t m = (static_cast<std::uint64_t>(j) * j) % (2 * n);
            const double a = -3.141592653589793238462643 * static_cast<double>(m) /
                             static_cast<double>(n);
            chirp_[j] = {std::cos(a), std::sin(a)};
        }
        std::vector<cplx> v(L, cplx{0.0, 0.0});
        v[0] = std::conj(chirp_[0]);
        for (std::size_t j = 1; j < n; ++j) {
            v[j] = std::conj(chirp_[j]);
            v[L - j] = std::conj(chirp_[j]);
        }
        base_->forward(v.data());
        chirp_spectrum_ = std::move(v);
    }

    std::size_t size() const noexcept { return n_; }

    void forward(std::vector<cplx>& x) const {
        if (x.size() != n_) throw std::invalid_argument("buffer size mismatch");
        if (n_ == 1) return;
        if (chirp_.empty()) {
            base_->forward(x.data());
            return;
        }
        const std::size_t L = base_->size();
        std::vector<cplx> u(L, cplx{0.0, 0.0});
        for (std::size_t j = 0; j < n_; ++j) u[j] = x[j] * chirp_[j];
        base_->forward(u.data());
        for (std::size_t k = 0; k < L; ++k) u[k] *= chirp_spectrum_[k];
        // inverse of the padded transform via conjugation
        for (auto& z : u) z = std::conj(z);
        base_->forward(u.data());
        const double inv = 1.0 / static_cast<double>(L);
        for (std::size_t k = 0; k < n_; ++k)
            x[k] = chirp_[k] * std::conj(u[k]) * inv;
    }

    void inverse(std::vector<cplx>& x) const {
        for (auto& z : x) z = std::conj(z);
        forward(x);
        const double inv = 1.0 / static_cast<double>(n_);
        for (auto& z : x) z = std::conj(z) * inv;
    }

private:
    std::size_t n_;
    std::unique_ptr<detail::Radix2> base_;
    std::vector<cplx> chirp_;
    std::vector<cplx> chirp_spectrum_;
};

} // namespace fbm::fft
