#include <catch_amalgamated.hpp>

#include <cmath>

#include <fbm/cov.hpp>
#include <fbm/kernels.hpp>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using fbm::HurstParameter;
using fbm::KernelKind;

// constants below were computed independently at 25-digit precision and frozen

TEST_CASE("moving-average constant matches the frozen table") {
    const double hs[] = {0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
    const double want[] = {0.3576857734223351360494729, 0.5563428650071969797459484,
                           0.7302829340799229656958684, 0.8807256833637268802960542,
                           1.076005184131807186305055,  1.091809130883912587914105,
                           1.021409906157561682484479,  0.8112206481433525147651101};
    for (int i = 0; i < 8; ++i)
        REQUIRE_THAT(fbm::ma_constant_closed(HurstParameter(hs[i])),
                     WithinRel(want[i], 1e-12));
    REQUIRE_THAT(fbm::ma_constant_closed(HurstParameter(0.5)), WithinAbs(1.0, 1e-14));
}

TEST_CASE("harmonizable constant matches the frozen table") {
    const double hs[] = {0.1, 0.3, 0.6, 0.9};
    const double want[] = {0.3005228491670069559744444, 0.4796836266557699639074375,
                           0.5775373839953982700589167, 0.4060848911475317680278161};
    for (int i = 0; i < 4; ++i)
        REQUIRE_THAT(fbm::ha_constant(HurstParameter(hs[i])),
                     WithinRel(want[i], 1e-12));
    REQUIRE_THAT(fbm::ha_constant(HurstParameter(0.5)),
                 WithinRel(0.5641895835477562869480795, 1e-14));
}

TEST_CASE("cosine integral matches its closed form") {
    const double hs[] = {0.1, 0.4, 0.7, 0.9};
    const double want[] = {5.536241278514454831718642, 1.773310906908746094211898,
                           1.563080788715066282687196, 3.032049880270203436510987};
    for (int i = 0; i < 4; ++i) {
        const HurstParameter H(hs[i]);
        REQUIRE_THAT(fbm::cosine_integral_closed(H), WithinRel(want[i], 1e-12));
        REQUIRE_THAT(fbm::cosine_integral_quadrature(H), WithinAbs(want[i], 1e-5));
        REQUIRE_THAT(fbm::cosine_integral_quadrature(H, 1e-8),
                     WithinAbs(want[i], 1e-8));
    }
    REQUIRE_THAT(fbm::cosine_integral_closed(HurstParameter(0.5)),
                 WithinRel(0.5 * 3.141592653589793238462643, 1e-14));
}

TEST_CASE("integral and closed moving-average forms agree") {
    for (double h : {0.15, 0.3, 0.5, 0.7, 0.85}) {
        const auto mc = fbm::ma_constant(HurstParameter(h));
        REQUIRE_THAT(mc.integral_form, WithinAbs(mc.closed_form, 1e-8));
    }
}

TEST_CASE("compact-support constant matches the table and its branch identities") {
    const double hs[] = {0.1, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
    const double want[] = {0.3576857734223351360494729, 0.7302829340799229656958684,
                           0.8807256833637268802960541, 0.1076005184131807186305055,
                           0.218361826176782517582821,  0.3064229718472685047453438,
                           0.3244882592573410059060441};
    for (int i = 0; i < 7; ++i)
        REQUIRE_THAT(fbm::volterra_constant(HurstParameter(hs[i])),
                     WithinRel(want[i], 1e-12));
    // below 1/2 it coincides with the moving-average constant; above it picks
    // up the factor (H - 1/2)
    for (double h : {0.1, 0.25, 0.45})
        REQUIRE_THAT(fbm::volterra_constant(HurstParameter(h)),
                     WithinRel(fbm::ma_constant_closed(HurstParameter(h)), 1e-12));
    for (double h : {0.55, 0.75, 0.9})
        REQUIRE_THAT(fbm::volterra_constant(HurstParameter(h)),
                     WithinRel((h - 0.5) * fbm::ma_constant_closed(HurstParameter(h)),
                               1e-12));
    REQUIRE_THROWS_AS(fbm::volterra_constant(HurstParameter(0.5)), std::domain_error);
}

TEST_CASE("moving-average kernel follows the one-sided power convention") {
    const HurstParameter H(0.7);
    const double K = fbm::ma_constant_closed(H);
    REQUIRE_THAT(fbm::kernel_value(KernelKind::moving_average, H, 1.0, 0.5),
                 WithinRel(K * std::pow(0.5, 0.2), 1e-13));
    REQUIRE_THAT(fbm::kernel_value(KernelKind::moving_average, H, 1.0, -1.0),
                 WithinRel(K * (std::pow(2.0, 0.2) - 1.0), 1e-13));
    REQUIRE(fbm::kernel_value(KernelKind::moving_average, H, 1.0, 1.0) == 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::moving_average, H, 1.0, 3.0) == 0.0);
    // H = 1/2 degenerates to the indicator of [0, t)
    const HurstParameter half(0.5);
    REQUIRE(fbm::kernel_value(KernelKind::moving_average, half, 1.0, 0.5) == 1.0);
    REQUIRE(fbm::kernel_value(KernelKind::moving_average, half, 1.0, -0.5) == 0.0);
    REQUIRE_THROWS_AS(fbm::kernel_value(KernelKind::moving_average, H, -1.0, 0.0),
                      std::domain_error);
}

TEST_CASE("harmonizable kernel vanishes at the origin of the frequency axis") {
    const HurstParameter H(0.3);
    REQUIRE(fbm::kernel_value(KernelKind::harmonizable, H, 2.0, 0.0) == 0.0);
    // sine branch for positive x, versed-sine branch for negative x
    REQUIRE(fbm::kernel_value(KernelKind::harmonizable, H, 0.5, 1.0) > 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::harmonizable, H, 0.5, -1.0) > 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::harmonizable, H, 0.0, -1.0) == 0.0);
}

TEST_CASE("compact-support kernel handles its singular boundary") {
    const HurstParameter lo(0.3), hi(0.7);
    REQUIRE(fbm::kernel_value(KernelKind::volterra, hi, 1.0, 2.0) == 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::volterra, hi, 1.0, -0.2) == 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::volterra, hi, 0.0, 0.0) == 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::volterra, hi, 1.0, 1.0) == 0.0);
    REQUIRE_THROWS_AS(fbm::kernel_value(KernelKind::volterra, lo, 1.0, 1.0),
                      std::domain_error);
    REQUIRE_THROWS_AS(fbm::kernel_value(KernelKind::volterra, hi, 1.0, 0.0),
                      std::domain_error);
    REQUIRE_THROWS_AS(
        fbm::kernel_value(KernelKind::volterra, HurstParameter(0.5), 1.0, 0.5),
        std::domain_error);
    REQUIRE(fbm::kernel_value(KernelKind::volterra, hi, 1.0, 0.5) > 0.0);
    REQUIRE(fbm::kernel_value(KernelKind::volterra, lo, 1.0, 0.5) > 0.0);
}

TEST_CASE("moving-average inner products reproduce the covariance") {
    REQUIRE_THAT(
        fbm::kernel_inner_product(KernelKind::moving_average, HurstParameter(0.7), 1.0,
                                  2.0),
        WithinAbs(1.3195079107728942594, 1e-6));
    REQUIRE_THAT(
        fbm::kernel_inner_product(KernelKind::moving_average, HurstParameter(0.3), 0.5,
                                  2.0),
        WithinAbs(fbm_covariance(HurstParameter(0.3), 0.5, 2.0), 1e-6));
    // equal arguments exercise the confluent edge
    REQUIRE_THAT(
        fbm::kernel_inner_product(KernelKind::moving_average, HurstParameter(0.6), 1.5,
                                  1.5),
        WithinAbs(std::pow(1.5, 1.2), 1e-6));
    REQUIRE_THAT(
        fbm::kernel_inner_product(KernelKind::moving_average, HurstParameter(0.5), 0.7,
                                  2.0),
        WithinAbs(0.7, 1e-12));
}

TEST_CASE("harmonizable inner products reproduce the covariance") {
    for (double h : {0.3, 0.8}) {
        const HurstParameter H(h);
        REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::harmonizable, H, 0.5, 1.0),
                     WithinAbs(fbm_covariance(H, 0.5, 1.0), 1e-6));
        REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::harmonizable, H, 1.0, 2.0),
                     WithinAbs(fbm_covariance(H, 1.0, 2.0), 1e-6));
    }
}

TEST_CASE("compact-support inner products reproduce the covariance") {
    fbm::QuadratureSpec spec;
    spec.abs_tolerance = 1e-6;
    REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::volterra, HurstParameter(0.3),
                                           1.0, 1.0, spec),
                 WithinAbs(1.0, 1e-4));
    REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::volterra, HurstParameter(0.3),
                                           2.0, 1.0, spec),
                 WithinAbs(0.75785828325519904117, 1e-4));
    REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::volterra, HurstParameter(0.45),
                                           2.0, 0.5, spec),
                 WithinAbs(0.4807779815767171595, 1e-4));
    REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::volterra, HurstParameter(0.7),
                                           1.0, 2.0, spec),
                 WithinAbs(1.3195079107728942594, 1e-4));
    REQUIRE_THAT(fbm::kernel_inner_product(KernelKind::volterra, HurstParameter(0.6),
                                           1.0, 1.0, spec),
                 WithinAbs(1.0, 1e-4));
}

TEST_CASE("the rejected kernel variant misses the covariance by a wide margin") {
    fbm::QuadratureSpec spec;
    spec.abs_tolerance = 1e-6;
    const double ip = fbm::kernel_inner_product(
        KernelKind::volterra, HurstParameter(0.3), 1.0, 1.0, spec,
        fbm::VolterraVariant::duplicated_prefactor);
    REQUIRE(std::fabs(ip - 1.0) > 0.05);
    REQUIRE(fbm::volterra_selected == fbm::VolterraVariant::single_prefactor);
}

TEST_CASE("inner products respect the time domain") {
    const HurstParameter H(0.7);
    REQUIRE(fbm::kernel_inner_product(KernelKind::moving_average, H, 0.0, 1.0) == 0.0);
    REQUIRE(fbm::kernel_inner_product(KernelKind::volterra, H, 1.0, 0.0) == 0.0);
    REQUIRE_THROWS_AS(
        fbm::kernel_inner_product(KernelKind::moving_average, H, -1.0, 1.0),
        std::domain_error);
    REQUIRE_THROWS_AS(fbm::kernel_inner_product(KernelKind::volterra,
                                                HurstParameter(0.5), 1.0, 2.0),
                      std::domain_error);
}

TEST_CASE("beta-function identity holds numerically") {
    const double cases[3][3] = {{0.75, 1.0, 2.0}, {0.6, 0.5, 3.0}, {0.9, 1.0, 1.5}};
    const double rhs[] = {4.409757595986331091117797, 4.781799758196162306865266,
                          6.67888578465696772808391};
    for (int i = 0; i < 3; ++i) {
        const auto [numeric, closed] = fbm::volterra_beta_identity_check(
            HurstParameter(cases[i][0]), cases[i][1], cases[i][2]);
        REQUIRE_THAT(closed, WithinRel(rhs[i], 1e-12));
        REQUIRE_THAT(numeric, WithinRel(closed, 1e-8));
    }
}

TEST_CASE("beta-function identity rejects out-of-domain arguments") {
    REQUIRE_THROWS_AS(fbm::volterra_beta_identity_check(HurstParameter(0.4), 1.0, 2.0),
                      std::domain_error);
    REQUIRE_THROWS_AS(fbm::volterra_beta_identity_check(HurstParameter(0.5), 1.0, 2.0),
                      std::domain_error);
    REQUIRE_THROWS_AS(fbm::volterra_beta_identity_check(HurstParameter(0.75), 2.0, 2.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(fbm::volterra_beta_identity_check(HurstParameter(0.75), 0.0, 2.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(fbm::volterra_beta_identity_check(HurstParameter(0.75), 3.0, 2.0),
                      std::invalid_argument);
}
