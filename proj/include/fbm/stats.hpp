#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fbm::stats {

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// two-pass; ddof = 1 gives the unbiased sample variance
inline double variance(const std::vector<double>& x, int ddof = 1) {
    if (x.size() <= static_cast<std::size_t>(ddof))
        throw std::invalid_argument("sample too small for variance");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - ddof);
}

inline double sample_autocovariance(const std::vector<double>& x, std::size_t lag) {
    if (x.size() <= lag) throw std::invalid_argument("lag exceeds sample length");
    const double m = mean(x);
    double s = 0.0;
    for (std::size_t i = 0; i + lag < x.size(); ++i)
        s += (x[i] - m) * (x[i + lag] - m);
    return s / static_cast<double>(x.size());
}

struct LineFit {
    double slope;
    double intercept;
};

inline LineFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("regression needs at least two matched points");
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("regression abscissae are degenerate");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.7071067811865475244008444);
}

// two-sided Kolmogorov-Smirnov distance against a cdf
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// asymptotic two-sided p-value, P(sqrt(n) D > x) = 2 sum (-1)^{k-1} e^{-2k^2x^2}
inline double ks_pvalue(double d, std::size_t n) {
    const double x = std::sqrt(static_cast<double>(n)) * d;
    if (x < 1e-8) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * s));
}

// linear-interpolation empirical quantile on a sorted copy
inline double quantile(std::vector<double> sample, double p) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    std::sort(sample.begin(), sample.end());
    const double idx = p * static_cast<double>(sample.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    if (lo + 1 >= sample.size()) return sample.back();
    const double frac = idx - static_cast<double>(lo);
    return sample[lo] * (1.0 - frac) + sample[lo + 1] * frac;
}

} // namespace fbm::stats
