#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wploc/quadrature.hpp"

using namespace wploc;
using Catch::Approx;

TEST_CASE("adaptive integrator on standard integrals", "[quadrature]") {
    auto r1 = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-14, 1e-13);
    CHECK(r1.value == Approx(std::sqrt(M_PI)).epsilon(1e-12));

    auto r2 = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-13, 1e-12);
    CHECK(r2.value == Approx(2.0 / 3.0).epsilon(1e-10));

    auto r3 = integrate([](double x) { return std::cos(40.0 * x); }, 0.0, M_PI, 1e-14, 1e-13);
    CHECK(std::abs(r3.value) < 1e-12);
}

TEST_CASE("half-line transform", "[quadrature]") {
    auto r = integrate_half_line([](double x) { return std::exp(-x); }, 0.0, 1e-13, 1e-12);
    CHECK(r.value == Approx(1.0).epsilon(1e-10));
    auto r2 = integrate_half_line([](double x) { return x * x * std::exp(-x * x); }, 0.0, 1e-13, 1e-12);
    CHECK(r2.value == Approx(std::sqrt(M_PI) / 4.0).epsilon(1e-10));
}

TEST_CASE("split integration respects breakpoints", "[quadrature]") {
    auto f = [](double x) { return std::abs(x); };
    auto r = integrate_split(f, {-1.0, 0.0, 2.0}, 1e-14, 1e-13);
    CHECK(r.value == Approx(0.5 + 2.0).epsilon(1e-12));
}

TEST_CASE("principal value integral with smooth numerator", "[quadrature][pv]") {
    // P int_{-1}^{1} e^x / x dx = 2 * Shi(1) = 2.1145018...
    auto pv = pv_integral([](double x) { return std::exp(x); }, 0.0, -1.0, 1.0);
    const double shi1 = 1.0572508753757285;   // sinh integral at 1
    CHECK(pv.value == Approx(2.0 * shi1).epsilon(1e-9));
    CHECK(pv.error < 1e-7);
}

TEST_CASE("principal value with a kinked numerator at the pole", "[quadrature][pv]") {
    // f(x) = sqrt(|x|): P int_{-1}^{1} sqrt(|x|)/x dx = 0 by oddness of the whole integrand
    auto pv = pv_integral([](double x) { return std::sqrt(std::abs(x)); }, 0.0, -1.0, 1.0);
    CHECK(std::abs(pv.value) < 1e-8);
    // asymmetric window: P int_{-1}^{4} sqrt(|x|)/x dx = -2 + 2*2 = 2
    auto pv2 = pv_integral([](double x) { return std::sqrt(std::abs(x)); }, 0.0, -1.0, 4.0);
    CHECK(pv2.value == Approx(2.0).epsilon(1e-7));
}
