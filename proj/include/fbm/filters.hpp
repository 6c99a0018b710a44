#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cov.hpp"

// Variation filters: polynomials a(x) = sum a_k x^k vanishing at x = 1. The
// order r is the multiplicity of that root; it controls how fast the filtered
// autocovariance decays and therefore when the estimator's CLT applies.

namespace fbm {

inline int validate_order(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("empty coefficient vector");
    const int q = static_cast<int>(coeffs.size()) - 1;
    constexpr double tol = 1e-9;
    // a^(j)(1) = sum_k a_k k(k-1)...(k-j+1)
    int r = 0;
    for (int j = 0; j <= q; ++j) {
        double d = 0.0;
        for (int k = j; k <= q; ++k) {
            double fall = 1.0;
            for (int i = 0; i < j; ++i) fall *= static_cast<double>(k - i);
            d += coeffs[static_cast<std::size_t>(k)] * fall;
        }
        if (std::fabs(d) > tol) break;
        ++r;
    }
    if (r == 0) throw std::invalid_argument("order zero: not a valid variation filter");
    return r;
}

struct Filter {
    std::vector<double> coeffs; // a_0 ... a_q
    int order;                  // multiplicity of the root at x = 1

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

inline Filter make_filter(std::vector<double> coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("filter needs degree >= 1");
    if (coeffs.back() == 0.0) throw std::invalid_argument("leading coefficient must be nonzero");
    const int r = validate_order(coeffs);
    return Filter{std::move(coeffs), r};
}

inline Filter make_named_filter(std::string_view name) {
    if (name == "increments1") return make_filter({-1.0, 1.0});
    if (name == "increments2") return make_filter({1.0, -2.0, 1.0});
    if (name == "daubechies4") {
        // expansion of (1/4)(x-1)(x^2(1-sqrt3) - 2x)
        const double s3 = std::sqrt(3.0);
        return make_filter({0.0, 0.5, (s3 - 3.0) / 4.0, (1.0 - s3) / 4.0});
    }
    throw std::invalid_argument("unknown filter name: " + std::string(name));
}

// a^m(x) = a(x^m): coefficient a_k moves to index k*m
inline Filter dilate(const Filter& f, int m) {
    if (m < 1) throw std::invalid_argument("dilation factor must be >= 1");
    if (m == 1) return f;
    std::vector<double> c(static_cast<std::size_t>(f.degree()) * m + 1, 0.0);
    for (int k = 0; k <= f.degree(); ++k)
        c[static_cast<std::size_t>(k) * m] = f.coeffs[static_cast<std::size_t>(k)];
    return Filter{std::move(c), f.order};
}

// output_n = sum_k a_k series_{n+k}, n = 0 ... N-q-1
inline std::vector<double> apply_filter(const std::vector<double>& series, const Filter& f) {
    const std::size_t q = static_cast<std::size_t>(f.degree());
    if (series.size() <= q) throw std::invalid_argument("series shorter than filter");
    std::vector<double> out(series.size() - q);
    for (std::size_t n = 0; n < out.size(); ++n) {
        double s = 0.0;
        for (std::size_t k = 0; k <= q; ++k) s += f.coeffs[k] * series[n + k];
        out[n] = s;
    }
    return out;
}

namespace detail {

// b_d = sum_k a_k a_{k-d}; symmetric in d
inline std::vector<double> filter_autocorr(const Filter& f) {
    const int q = f.degree();
    std::vector<double> b(static_cast<std::size_t>(q) + 1, 0.0);
    for (int d = 0; d <= q; ++d)
        for (int k = d; k <= q; ++k)
            b[static_cast<std::size_t>(d)] +=
                f.coeffs[static_cast<std::size_t>(k)] * f.coeffs[static_cast<std::size_t>(k - d)];
    return b;
}

// direct evaluation of -1/2 sum_d b_d |n+d|^2H
inline double filtered_acv_direct(double g, const std::vector<double>& b, long n) {
    const long q = static_cast<long>(b.size()) - 1;
    double s = b[0] * std::pow(std::fabs(static_cast<double>(n)), g);
    for (long d = 1; d <= q; ++d)
        s += b[static_cast<std::size_t>(d)] *
             (std::pow(std::fabs(static_cast<double>(n + d)), g) +
              std::pow(std::fabs(static_cast<double>(n - d)), g));
    return -0.5 * s;
}

// For n >> q the direct sum cancels catastrophically: the result is a 2r-th
// finite difference of x^2H, smaller than the summands by a factor n^-2r.
// Regroup through the binomial series |n+d|^2H = n^2H sum_j C(2H,j)(d/n)^j.
// The moments mu_j = sum_d b_d d^j vanish identically for j < 2r (the filter
// has r vanishing moments, so b has 2r), and they must be dropped rather than
// summed: their float residue, multiplied by n^2H, would otherwise dominate
// the true value. Odd-j moments vanish by the symmetry b_d = b_{-d}.
inline double filtered_acv_series(double g, const std::vector<double>& b, long n, int order) {
    const long q = static_cast<long>(b.size()) - 1;
    const double x = static_cast<double>(n);
    double binom = 1.0; // C(g, j) running product
    double sum = 0.0;
    double npow = 1.0;  // n^-j
    const int jmin = 2 * order;
    for (int j = 0; j <= 120; ++j) {
        if (j >= jmin && j % 2 == 0) {
            double mu = 0.0;
            for (long d = 1; d <= q; ++d)
                mu += 2.0 * b[static_cast<std::size_t>(d)] *
                      std::pow(static_cast<double>(d), j);
            const double term = binom * mu * npow;
            sum += term;
            if (j > jmin + 2 && std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
        }
        binom *= (g - static_cast<double>(j)) / static_cast<double>(j + 1);
        npow /= x;
    }
    return -0.5 * std::pow(x, g) * sum;
}

} // namespace detail

// rho_H^a(lag) = -1/2 sum_k sum_j a_k a_j |lag + k - j|^2H; even in lag
inline double filtered_autocovariance(HurstParameter H, const Filter& f, long lag) {
    const auto b = detail::filter_autocorr(f);
    const double g = 2.0 * H.value();
    const long n = std::labs(lag);
    const long q = f.degree();
    if (n <= 4 * (q + 1)) return detail::filtered_acv_direct(g, b, n);
    return detail::filtered_acv_series(g, b, n, f.order);
}

} // namespace fbm
