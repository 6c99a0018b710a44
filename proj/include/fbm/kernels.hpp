#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "cov.hpp"
#include "quadrature.hpp"

// The three Wiener-integral kernel families that reproduce the fBm covariance,
// their normalizing constants, and the quadrature machinery that verifies
// int k_t k_s = cov(t,s) numerically. All endpoint singularities are removed
// by exact power substitutions (or quartic softening where the exponent range
// permits) before the adaptive rule sees the integrand; distances to interval
// endpoints are propagated exactly through each substitution, because
// recomputing t - x by subtraction underflows next to the endpoint and turns
// an integrable (t-x)^-a into a hard inf.

namespace fbm {

enum class KernelKind { moving_average, harmonizable, volterra };

// The compact-support kernel for H < 1/2 circulates in two versions differing
// by a repeated x^{1/2-H} factor inside the bracket. Only one reproduces the
// covariance; the selection was made by the inner-product check and is frozen
// here (see the kernel test suite for the discriminating run).
enum class VolterraVariant { duplicated_prefactor, single_prefactor };
inline constexpr VolterraVariant volterra_selected = VolterraVariant::single_prefactor;

struct QuadratureSpec {
    double abs_tolerance = 1e-8;
    double truncation_radius = 50.0;
    int max_subdivisions = 20000;
};

namespace detail {

inline constexpr double pi = 3.141592653589793238462643;

inline double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

inline double pospow(double y, double e) { return y > 0.0 ? std::pow(y, e) : 0.0; }

inline double inner_tol(const QuadratureSpec& spec) {
    return std::max(1e-13, spec.abs_tolerance * 1e-4);
}

} // namespace detail

inline double ma_constant_closed(HurstParameter H) {
    const double h = H.value();
    return std::sqrt(std::tgamma(2.0 * h + 1.0) * std::sin(detail::pi * h)) /
           std::tgamma(h + 0.5);
}

// (1/(2H) + int_0^inf ((x+1)^mu - x^mu)^2 dx)^{-1/2}, evaluated numerically.
// [0,1] uses sigma = x^{2H} when mu < 0 (the x^{2mu} edge), written through
// expm1 so the x -> 0 limit is exact; [1,inf) maps through x = 1/v and then
// sigma = v^{2-2H}, which absorbs the v^{1-2H} tail weight for every H.
inline double ma_constant_integral(HurstParameter H, double abs_tol = 1e-9,
                                   int max_subdivisions = 20000) {
    const double h = H.value();
    const double mu = h - 0.5;
    double total = 1.0 / (2.0 * h);
    if (mu != 0.0) {
        double i01;
        if (mu < 0.0) {
            const double p = 2.0 * h;
            auto g = [&](double sg) {
                const double x = std::pow(sg, 1.0 / p);
                const double e = std::expm1(mu * std::log1p(1.0 / x));
                return e * e / p;
            };
            i01 = quad::integrate(g, 0.0, 1.0, abs_tol / 3.0, max_subdivisions).value;
        } else {
            auto f = [&](double x) {
                const double d = std::pow(x + 1.0, mu) - std::pow(x, mu);
                return d * d;
            };
            i01 = quad::integrate(f, 0.0, 1.0, abs_tol / 3.0, max_subdivisions).value;
        }
        const double pe = 2.0 - 2.0 * h;
        auto gtail = [&](double sg) {
            const double v = std::pow(sg, 1.0 / pe);
            const double e = std::expm1(mu * std::log1p(v)) / v;
            return e * e / pe;
        };
        const double i1inf =
            quad::integrate(gtail, 0.0, 1.0, abs_tol / 3.0, max_subdivisions).value;
        total += i01 + i1inf;
    }
    return 1.0 / std::sqrt(total);
}

struct MaConstant {
    double integral_form;
    double closed_form;
};

inline MaConstant ma_constant(HurstParameter H) {
    return {ma_constant_integral(H), ma_constant_closed(H)};
}

// I(H) = int_0^inf (1-cos x)/x^{2H+1} dx, closed form
inline double cosine_integral_closed(HurstParameter H) {
    const double h = H.value();
    return detail::pi / (2.0 * std::tgamma(2.0 * h + 1.0) * std::sin(detail::pi * h));
}

// Direct quadrature of I(H): smooth head via 1-cos x = 2 sin^2(x/2) and the
// substitution sigma = x^{2-2H}; the x^{-2H-1} tail integrates analytically;
// the oscillatory remainder is quadrature up to a radius R plus a four-term
// integration-by-parts expansion of int_R^inf cos x x^{-s} dx, whose error
// s(s+1)(s+2) R^{-s-3} fixes R without ever growing past a few hundred.
inline double cosine_integral_quadrature(HurstParameter H, double abs_tol = 1e-5,
                                         const QuadratureSpec& spec = {}) {
    const double h = H.value();
    const double s = 2.0 * h + 1.0;
    const double pe = 2.0 - 2.0 * h;
    auto head = [&](double sg) {
        const double x = std::pow(sg, 1.0 / pe);
        const double r = std::sin(0.5 * x) / x;
        return 2.0 * r * r / pe;
    };
    double total = quad::integrate(head, 0.0, std::pow(detail::pi, pe), abs_tol / 3.0,
                                   spec.max_subdivisions)
                       .value;
    total += std::pow(detail::pi, -2.0 * h) / (2.0 * h);
    const double drop = s * (s + 1.0) * (s + 2.0);
    const double R = std::max(spec.truncation_radius,
                              std::pow(3.0 * drop / abs_tol, 1.0 / (s + 3.0)));
    auto osc = [&](double x) { return std::cos(x) * std::pow(x, -s); };
    total -=
        quad::integrate(osc, detail::pi, R, abs_tol / 3.0, spec.max_subdivisions).value;
    const double tail = -std::sin(R) * std::pow(R, -s) +
                        s * std::cos(R) * std::pow(R, -s - 1.0) +
                        s * (s + 1.0) * std::sin(R) * std::pow(R, -s - 2.0) -
                        drop * std::cos(R) * std::pow(R, -s - 3.0);
    return total - tail;
}

// normalization fixed by the integral definition (2 I(H))^{-1/2}; the value is
// evaluated through the closed form of I(H)
inline double ha_constant(HurstParameter H) {
    const double h = H.value();
    return std::sqrt(std::tgamma(2.0 * h + 1.0) * std::sin(detail::pi * h) / detail::pi);
}

inline double volterra_constant(HurstParameter H) {
    const double h = H.value();
    if (h == 0.5)
        throw std::domain_error("volterra representation requires H != 1/2");
    if (h > 0.5) {
        return std::sqrt(h * (2.0 * h - 1.0) / detail::beta_fn(2.0 - 2.0 * h, h - 0.5));
    }
    return std::sqrt(2.0 * h /
                     ((1.0 - 2.0 * h) * detail::beta_fn(1.0 - 2.0 * h, h + 0.5)));
}

namespace detail {

// H > 1/2 branch: K x^{-mu} int_x^t s^mu (s-x)^{mu-1} ds with the inner
// integral taken through w = (s-x)^mu, whose Jacobian removes the endpoint
// singularity exactly.
inline double volterra_kernel_hi(double h, double K, double x, double tmx,
                                 double tol, int max_subdivisions) {
    const double mu = h - 0.5;
    const double wmax = std::pow(tmx, mu);
    auto f = [&](double w) { return std::pow(x + std::pow(w, 1.0 / mu), mu); };
    const double inner =
        quad::integrate(f, 0.0, wmax, tol, max_subdivisions).value / mu;
    return K * std::pow(x, -mu) * inner;
}

// H < 1/2 branch. The inner integral int_x^t u^{-nu-1}(u-x)^{-nu} du is taken
// through u = x e^y, which factors it as x^{-2nu} G with
// G = int_0^{log(t/x)} e^{-nu y}(e^y-1)^{-nu} dy; any other parametrization
// leaves a boundary layer of width x^{1-nu} that adaptive bisection cannot
// reach when the outer quadrature probes x near 0. The y = z^4 softening
// flattens the (e^y-1)^{-nu} edge.
inline double volterra_kernel_lo(double h, double K, double t, double x, double tmx,
                                 VolterraVariant variant, double tol,
                                 int max_subdivisions) {
    const double nu = 0.5 - h;
    const double L = (tmx < 0.5 * t) ? -std::log1p(-tmx / t) : std::log(t / x);
    double G = 0.0;
    if (L > 0.0) {
        auto f = [&](double z) {
            const double z4 = z * z * z * z;
            return std::exp(-nu * z4) * std::pow(std::expm1(z4), -nu) * 4.0 * z * z * z;
        };
        G = quad::integrate(f, 0.0, std::pow(L, 0.25), tol, max_subdivisions).value;
    }
    const double main = std::pow(x, nu) * std::pow(t, -nu) * std::pow(tmx, -nu);
    if (variant == VolterraVariant::single_prefactor)
        return K * (main + nu * std::pow(x, -nu) * G);
    return K * (main + nu * G);
}

inline double volterra_kernel_at(HurstParameter H, double t, double x, double tmx,
                                 VolterraVariant variant, double tol,
                                 int max_subdivisions) {
    const double h = H.value();
    const double K = volterra_constant(H);
    if (h > 0.5) return volterra_kernel_hi(h, K, x, tmx, tol, max_subdivisions);
    return volterra_kernel_lo(h, K, t, x, tmx, variant, tol, max_subdivisions);
}

} // namespace detail

inline double kernel_value(KernelKind kind, HurstParameter H, double t, double x,
                           VolterraVariant variant = volterra_selected,
                           const QuadratureSpec& spec = {}) {
    if (!(t >= 0.0)) throw std::domain_error("time arguments must be nonnegative");
    const double h = H.value();
    switch (kind) {
    case KernelKind::moving_average: {
        if (x >= t) return 0.0;
        const double mu = h - 0.5;
        const double K = ma_constant_closed(H);
        // pointwise convention (y)_+^mu := 0 for y <= 0, also for mu < 0;
        // the kernel is an L^2 object and the x = t point carries no mass
        return K * (detail::pospow(t - x, mu) - detail::pospow(-x, mu));
    }
    case KernelKind::harmonizable: {
        if (x == 0.0) return 0.0; // both one-sided limits vanish except H>1/2 from above
        const double K = ha_constant(H);
        const double w = std::pow(std::fabs(x), -h - 0.5);
        return K * w * (x > 0.0 ? std::sin(t * x) : 1.0 - std::cos(t * x));
    }
    case KernelKind::volterra: {
        if (h == 0.5) throw std::domain_error("volterra representation requires H != 1/2");
        if (x < 0.0 || x > t || t == 0.0) return 0.0;
        if (x == 0.0) throw std::domain_error("volterra kernel diverges at x = 0");
        if (x == t) {
            if (h > 0.5) return 0.0; // continuous limit
            throw std::domain_error("volterra kernel diverges at x = t for H < 1/2");
        }
        return detail::volterra_kernel_at(H, t, x, t - x, variant,
                                          detail::inner_tol(spec),
                                          spec.max_subdivisions);
    }
    }
    throw std::logic_error("unreachable");
}

namespace detail {

inline double inner_product_ma(HurstParameter H, double t, double s,
                               const QuadratureSpec& spec) {
    const double h = H.value();
    const double mu = h - 0.5;
    const double K = ma_constant_closed(H);
    const double lo = std::min(t, s);
    const double hi = std::max(t, s);
    const double tol = spec.abs_tolerance / (K * K);
    double total = 0.0;

    if (mu == 0.0) {
        // indicator kernels: overlap has length lo, no mass on x < 0
        return K * K * lo;
    }

    // x in (0, lo/2]: smooth
    auto mid = [&](double x) { return std::pow(hi - x, mu) * std::pow(lo - x, mu); };
    total += quad::integrate(mid, 0.0, 0.5 * lo, tol / 8.0, spec.max_subdivisions).value;

    // x in [lo/2, lo): sigma = (lo-x)^pA makes the edge exactly flat
    const double pA = (hi == lo ? 2.0 * mu : mu) + 1.0;
    auto nearlo = [&](double sg) {
        if (hi == lo) return 1.0 / pA;
        const double lomx = std::pow(sg, 1.0 / pA);
        return std::pow((hi - lo) + lomx, mu) / pA;
    };
    total += quad::integrate(nearlo, 0.0, std::pow(0.5 * lo, pA), tol / 8.0,
                             spec.max_subdivisions)
                 .value;

    // x < 0, u = -x in (0, 1]
    if (mu < 0.0) {
        const double p0 = 2.0 * h;
        auto near0 = [&](double sg) {
            const double u = std::pow(sg, 1.0 / p0);
            return std::expm1(mu * std::log1p(hi / u)) *
                   std::expm1(mu * std::log1p(lo / u)) / p0;
        };
        total += quad::integrate(near0, 0.0, 1.0, tol / 8.0, spec.max_subdivisions).value;
    } else {
        auto direct0 = [&](double u) {
            const double a = std::pow(u + hi, mu) - std::pow(u, mu);
            const double b = std::pow(u + lo, mu) - std::pow(u, mu);
            return a * b;
        };
        total += quad::integrate(direct0, 0.0, 1.0, tol / 8.0, spec.max_subdivisions).value;
    }

    // u in [1, R): u = 1/v, sigma = v^{2-2H}; truncation bounded by
    // ~ mu^2 t s R^{2H-2}/(2-2H), pushed under tol/10
    const double pe = 2.0 - 2.0 * h;
    double R = std::max(spec.truncation_radius, 10.0 * (hi + 1.0));
    const double tail_coeff = 1.5 * mu * mu * hi * lo / pe;
    R = std::max(R, std::pow(tail_coeff * 10.0 / tol, 1.0 / pe));
    auto far = [&](double sg) {
        const double v = std::pow(sg, 1.0 / pe);
        const double et = std::expm1(mu * std::log1p(hi * v)) / v;
        const double es = std::expm1(mu * std::log1p(lo * v)) / v;
        return et * es / pe;
    };
    total += quad::integrate(far, std::pow(R, -pe), 1.0, tol / 8.0, spec.max_subdivisions)
                 .value;

    return K * K * total;
}

// trigonometric reduction: the two half-line pieces collapse to
// I(H) (t^2H + s^2H - |t-s|^2H); the quadrature value of I carries all the
// numerical content, the rest is the closed-form constant
inline double inner_product_ha(HurstParameter H, double t, double s,
                               const QuadratureSpec& spec) {
    const double h = H.value();
    const double K = ha_constant(H);
    const double iq = cosine_integral_quadrature(
        H, std::min(1e-5, spec.abs_tolerance * 0.1), spec);
    const double g = 2.0 * h;
    return K * K * iq *
           (std::pow(t, g) + std::pow(s, g) - std::pow(std::fabs(t - s), g));
}

inline double inner_product_volterra(HurstParameter H, double t, double s,
                                     VolterraVariant variant,
                                     const QuadratureSpec& spec) {
    const double lo = std::min(t, s);
    const double hi = std::max(t, s);
    const double itol = inner_tol(spec);
    auto kv = [&](double tt, double x, double ttmx) {
        return volterra_kernel_at(H, tt, x, ttmx, variant, itol, spec.max_subdivisions);
    };
    // quartic softening at both ends of [0, lo], split in the middle; endpoint
    // distances flow through the substitution unrounded
    auto left = [&](double v) {
        const double x = v * v * v * v;
        return kv(hi, x, hi - x) * kv(lo, x, lo - x) * 4.0 * v * v * v;
    };
    auto right = [&](double w) {
        const double w4 = w * w * w * w;
        const double x = lo - w4;
        return kv(hi, x, (hi - lo) + w4) * kv(lo, x, w4) * 4.0 * w * w * w;
    };
    const double half = 0.5 * lo;
    const double tol = spec.abs_tolerance;
    double total = quad::integrate(left, 0.0, std::pow(half, 0.25), tol / 2.0,
                                   spec.max_subdivisions)
                       .value;
    total += quad::integrate(right, 0.0, std::pow(lo - half, 0.25), tol / 2.0,
                             spec.max_subdivisions)
                 .value;
    return total;
}

} // namespace detail

inline double kernel_inner_product(KernelKind kind, HurstParameter H, double t, double s,
                                   const QuadratureSpec& spec = {},
                                   VolterraVariant variant = volterra_selected) {
    if (!(t >= 0.0 && s >= 0.0))
        throw std::domain_error("time arguments must be nonnegative");
    if (t == 0.0 || s == 0.0) return 0.0;
    switch (kind) {
    case KernelKind::moving_average:
        return detail::inner_product_ma(H, t, s, spec);
    case KernelKind::harmonizable:
        return detail::inner_product_ha(H, t, s, spec);
    case KernelKind::volterra:
        if (H.value() == 0.5)
            throw std::domain_error("volterra representation requires H != 1/2");
        return detail::inner_product_volterra(H, t, s, variant, spec);
    }
    throw std::logic_error("unreachable");
}

// Verifies the change-of-variable identity behind the H > 1/2 covariance
// computation: int_0^u x^{-2mu}(u-x)^{mu-1}(v-x)^{mu-1} dx against
// u^-mu v^-mu (v-u)^{2H-2} B(2-2H, H-1/2). Returns (numeric, closed).
inline std::pair<double, double> volterra_beta_identity_check(
    HurstParameter H, double u, double v, const QuadratureSpec& spec = {}) {
    const double h = H.value();
    if (!(h > 0.5)) throw std::domain_error("identity requires H > 1/2");
    if (!(u > 0.0 && v >= u)) throw std::invalid_argument("need 0 < u <= v");
    if (u == v) throw std::invalid_argument("identity degenerate on the diagonal");
    const double mu = h - 0.5;
    const double tol = std::min(spec.abs_tolerance, 1e-9);

    // [0, u/2]: sigma = x^{1-2mu} removes the x^{-2mu} edge
    const double p1 = 1.0 - 2.0 * mu;
    auto left = [&](double sg) {
        const double x = std::pow(sg, 1.0 / p1);
        return std::pow(u - x, mu - 1.0) * std::pow(v - x, mu - 1.0) / p1;
    };
    double numeric = quad::integrate(left, 0.0, std::pow(0.5 * u, p1), tol,
                                     spec.max_subdivisions)
                         .value;

    // [u/2, u]: sigma = (u-x)^mu removes the (u-x)^{mu-1} edge
    auto right = [&](double sg) {
        const double umx = std::pow(sg, 1.0 / mu);
        const double x = u - umx;
        const double vmx = (v - u) + umx;
        return std::pow(x, -2.0 * mu) * std::pow(vmx, mu - 1.0) / mu;
    };
    numeric += quad::integrate(right, 0.0, std::pow(0.5 * u, mu), tol,
                               spec.max_subdivisions)
                   .value;

    const double closed = std::pow(u, -mu) * std::pow(v, -mu) *
                          std::pow(v - u, 2.0 * h - 2.0) *
                          detail::beta_fn(2.0 - 2.0 * h, h - 0.5);
    return {numeric, closed};
}

} // namespace fbm
