#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wploc/special.hpp"

#include "reference_values.hpp"

using namespace wploc;
using Catch::Approx;

namespace {

// relative error against the local modulus: near the oscillatory zeros of a
// single Airy function the pointwise relative error is ill-posed, the pair
// error against M(y) is the meaningful metric
double pair_rel_err(const AiryPair& got, const refv::AiryRef& ref) {
    const double m = std::sqrt(ref.ai * ref.ai + ref.bi * ref.bi);
    const double md = std::sqrt(ref.dai * ref.dai + ref.dbi * ref.dbi);
    double e = 0.0;
    e = std::max(e, std::abs(got.ai - ref.ai) / m);
    e = std::max(e, std::abs(got.bi - ref.bi) / m);
    e = std::max(e, std::abs(got.dai - ref.dai) / md);
    e = std::max(e, std::abs(got.dbi - ref.dbi) / md);
    return e;
}

} // namespace

TEST_CASE("airy_pair matches the high-precision table", "[special][airy]") {
    for (const auto& ref : refv::airy_table) {
        CAPTURE(ref.y);
        const AiryPair p = airy_pair(ref.y);
        CHECK(pair_rel_err(p, ref) < 1e-10);
        // pointwise relative accuracy away from zeros
        const double m = std::sqrt(ref.ai * ref.ai + ref.bi * ref.bi);
        if (std::abs(ref.ai) > 1e-2 * m)
            CHECK(std::abs(p.ai - ref.ai) <= 1e-10 * std::abs(ref.ai));
        if (std::abs(ref.bi) > 1e-2 * m)
            CHECK(std::abs(p.bi - ref.bi) <= 1e-10 * std::abs(ref.bi));
    }
}

TEST_CASE("airy_pair at zero argument", "[special][airy]") {
    const AiryPair p = airy_pair(0.0);
    CHECK(p.ai == Approx(0.3550280539).epsilon(1e-9));
    CHECK(p.bi == Approx(0.6149266274).epsilon(1e-9));
    CHECK(p.dai == Approx(-0.2588194038).epsilon(1e-9));
    CHECK(p.dbi == Approx(0.4482883574).epsilon(1e-9));
}

TEST_CASE("airy Wronskian identity", "[special][airy]") {
    // Ai Bi' - Ai' Bi = 1/pi on the oracle window
    for (double y = -20.0; y <= 5.0; y += 0.37) {
        const AiryPair p = airy_pair(y);
        const double w = p.ai * p.dbi - p.dai * p.bi;
        CHECK(std::abs(w - 1.0 / M_PI) < 1e-9);
    }
}

TEST_CASE("airy modulus leading asymptote at y = -10", "[special][airy]") {
    const AiryPair p = airy_pair(-10.0);
    const double m2 = p.ai * p.ai + p.bi * p.bi;
    const double lead = 1.0 / (M_PI * std::sqrt(10.0));
    CHECK(std::abs(m2 - lead) / lead < 1e-3);
}

TEST_CASE("airy_pair overflow signal", "[special][airy]") {
    CHECK_THROWS_AS(airy_pair(150.0), std::overflow_error);
    CHECK_THROWS_AS(airy_pair(std::nan("")), std::invalid_argument);
}

TEST_CASE("m_log_derivative against the table", "[special][airy]") {
    for (const auto& ref : refv::mlog_table) {
        CAPTURE(ref.y);
        const double v = m_log_derivative(ref.y);
        CHECK(v == Approx(ref.mlogd).epsilon(2e-10).margin(1e-300));
    }
}

TEST_CASE("m_log_derivative value at zero", "[special][airy]") {
    // (Ai Ai' + Bi Bi')/(Ai^2 + Bi^2) at 0 = sqrt(3)/(3 pi) / (4 * 3^(-4/3) / Gamma(2/3)^2)
    CHECK(m_log_derivative(0.0) == Approx(0.36450556647361364).epsilon(1e-12));
}

TEST_CASE("m_log_derivative deep oscillatory asymptote", "[special][airy]") {
    // M'/M -> -1/(4y) for y -> -inf
    CHECK(m_log_derivative(-50.0) == Approx(1.0 / 200.0).epsilon(1e-3));
    CHECK(std::abs(m_log_derivative(-50.0) - 0.005) / 0.005 < 1e-3);
}

TEST_CASE("m_log_derivative sign and growth on the positive side", "[special][airy]") {
    // Bi dominates: M'/M -> +sqrt(y)
    const double v5 = m_log_derivative(5.0);
    CHECK(v5 > 0.0);
    CHECK(v5 == Approx(std::sqrt(5.0)).epsilon(0.03));
    CHECK(m_log_derivative(400.0) == Approx(20.0).epsilon(1e-3));
}

TEST_CASE("m_log_derivative continuity at the evaluation switchovers", "[special][airy]") {
    for (double y0 : {-12.0, -7.5, -4.2, 4.2, 9.0, 25.0}) {
        const double a = m_log_derivative(y0 - 1e-4);
        const double b = m_log_derivative(y0 + 1e-4);
        CHECK(std::abs(a - b) < 1e-2);
    }
}

TEST_CASE("faddeeva_w against the table", "[special][faddeeva]") {
    for (const auto& ref : refv::w_table) {
        CAPTURE(ref.z);
        const cplx v = faddeeva_w(ref.z);
        CHECK(std::abs(v - ref.w) / std::abs(ref.w) < 1e-11);
    }
}

TEST_CASE("erfc_complex against the table", "[special][erfc]") {
    for (const auto& ref : refv::erfc_table) {
        CAPTURE(ref.z);
        const cplx v = erfc_complex(ref.z);
        const double tol = ref.z.imag() == 0.0 ? 1e-12 : 1e-9;
        CHECK(std::abs(v - ref.v) / std::abs(ref.v) < tol);
    }
}

TEST_CASE("erfc basics", "[special][erfc]") {
    CHECK(erfc_complex({0.0, 0.0}).real() == Approx(1.0));
    CHECK(erfc_complex({1.0, 0.0}).real() == Approx(0.157299207).epsilon(1e-9));
}

TEST_CASE("erfc reflection identity on random strip points", "[special][erfc]") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> ux(-20.0, 20.0), uy(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const cplx z(ux(gen), uy(gen));
        const cplx s = erfc_complex(z) + erfc_complex(-z);
        CHECK(std::abs(s - 2.0) < 1e-10 * std::max(1.0, std::abs(erfc_complex(z))));
    }
}

TEST_CASE("erfi against the table", "[special][erfi]") {
    for (const auto& ref : refv::erfi_table) {
        CAPTURE(ref.x);
        CHECK(erfi_real(ref.x) == Approx(ref.v).epsilon(1e-10));
        CHECK(erfi_real(-ref.x) == Approx(-ref.v).epsilon(1e-10));
    }
    CHECK(erfi_real(0.0) == 0.0);
    CHECK(erfi_real(1.0) == Approx(1.6504257588).epsilon(1e-10));
    CHECK_THROWS_AS(erfi_real(27.0), std::overflow_error);
}

TEST_CASE("principal_sqrt branch on the negative real axis", "[special]") {
    const cplx r = principal_sqrt(cplx(-4.0, 0.0));
    CHECK(r.real() == Approx(0.0).margin(1e-300));
    CHECK(r.imag() == Approx(2.0));
    const cplx r2 = principal_sqrt(cplx(-4.0, -0.0));   // signed zero must not flip the branch
    CHECK(r2.imag() == Approx(2.0));
}
