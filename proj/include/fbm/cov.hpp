#pragma once

#include <cmath>
#include <stdexcept>

// Closed-form covariance structure of fractional Brownian motion and its
// increment process (fractional Gaussian noise). Everything else in the
// library is tested against these formulas.

namespace fbm {

class HurstParameter {
public:
    explicit HurstParameter(double h) : h_(h) {
        if (!(h > 0.0 && h < 1.0))
            throw std::domain_error("hurst parameter must lie strictly inside (0,1)");
    }
    double value() const noexcept { return h_; }

private:
    double h_;
};

namespace detail {
inline void require_time(double t) {
    if (!(t >= 0.0)) throw std::domain_error("time arguments must be nonnegative");
}
} // namespace detail

// cov(B_t, B_s) = (t^2H + s^2H - |t-s|^2H) / 2
inline double fbm_covariance(HurstParameter H, double t, double s) {
    detail::require_time(t);
    detail::require_time(s);
    const double g = 2.0 * H.value();
    return 0.5 * (std::pow(t, g) + std::pow(s, g) - std::pow(std::fabs(t - s), g));
}

// cov(B_t1 - B_s1, B_t2 - B_s2)
inline double increment_covariance(HurstParameter H, double s1, double t1, double s2,
                                   double t2) {
    detail::require_time(s1);
    detail::require_time(t1);
    detail::require_time(s2);
    detail::require_time(t2);
    const double g = 2.0 * H.value();
    return 0.5 * (std::pow(std::fabs(t1 - s2), g) + std::pow(std::fabs(t2 - s1), g) -
                  std::pow(std::fabs(t2 - t1), g) - std::pow(std::fabs(s2 - s1), g));
}

// E (B_t - B_s)^2 = |t-s|^2H
inline double variogram(HurstParameter H, double t, double s) {
    detail::require_time(t);
    detail::require_time(s);
    return std::pow(std::fabs(t - s), 2.0 * H.value());
}

// autocovariance of unit-grid increments at integer lag n;
// the second-difference form of x^2H, evaluated directly
inline double fgn_autocovariance(HurstParameter H, long n) {
    if (n < 0) throw std::domain_error("negative lag");
    if (n == 0) return 1.0;
    const double g = 2.0 * H.value();
    const double x = static_cast<double>(n);
    return 0.5 * (std::pow(x + 1.0, g) + std::pow(x - 1.0, g) - 2.0 * std::pow(x, g));
}

} // namespace fbm
