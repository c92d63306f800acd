#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

#include "wploc/potential.hpp"

using namespace wploc;
using Catch::Approx;

namespace {

PotentialSpec small_spec() {
    PotentialSpec s;
    s.v0 = 0.0325;
    s.sigma_c = 1.0;
    s.box_length = 100.0;
    s.n_grid = 1600;
    s.seed = 42;
    return s;
}

} // namespace

TEST_CASE("spec validation", "[potential]") {
    PotentialSpec s = small_spec();
    CHECK_NOTHROW(s.validate());
    CHECK(s.weak_disorder());
    s.v0 = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec();
    s.box_length = 20.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec();
    s.n_grid = 100;   // h = 1 > sigma/8
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("c2 correlation values", "[potential]") {
    const PotentialSpec s = small_spec();
    const double v2 = s.v0 * s.v0;
    CHECK(c2(0.0, s) == Approx(v2));
    CHECK(c2(s.sigma_c, s) == Approx(v2 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(c2(s.sigma_c, s) == Approx(0.60653065971263342 * v2).epsilon(1e-10));
    CHECK(c2(20.0, s) < 1e-80 * v2);
    // wrapped distance: dx and L - dx coincide
    CHECK(c2(s.box_length - 1.0, s) == Approx(c2(1.0, s)));
}

TEST_CASE("sampling is deterministic per (seed, index)", "[potential]") {
    const PotentialSpec s = small_spec();
    const PotentialSample a = sample_potential(s, 7);
    const PotentialSample b = sample_potential(s, 7);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == b.values[i]);   // bit-identical
    const PotentialSample c = sample_potential(s, 8);
    bool differs = false;
    for (std::size_t i = 0; i < a.values.size(); ++i) differs |= a.values[i] != c.values[i];
    CHECK(differs);
}

TEST_CASE("ensemble statistics match the target correlation", "[potential][slow]") {
    PotentialSpec s = small_spec();
    const std::size_t n_real = 600;
    std::vector<PotentialSample> samples;
    samples.reserve(n_real);
    for (std::size_t r = 0; r < n_real; ++r) samples.push_back(sample_potential(s, r));

    // mean of the field across realizations
    double mean = 0.0;
    for (const auto& smp : samples)
        mean += std::accumulate(smp.values.begin(), smp.values.end(), 0.0) / double(smp.values.size());
    mean /= double(n_real);
    // effective cells ~ L / sigma_c
    const double bound = 3.0 * s.v0 / std::sqrt(double(n_real) * s.box_length / s.sigma_c);
    CHECK(std::abs(mean) < bound);

    const std::vector<double> corr = empirical_autocorrelation(samples);
    const double h = s.grid_step();
    const auto lag = [&](double dx) { return corr[std::size_t(std::lround(dx / h))]; };
    CHECK(lag(0.0) == Approx(c2(0.0, s)).epsilon(0.05));
    CHECK(lag(s.sigma_c) == Approx(c2(s.sigma_c, s)).epsilon(0.10));
    CHECK(lag(2.0 * s.sigma_c) == Approx(c2(2.0 * s.sigma_c, s)).epsilon(0.20));

    // stationarity: half-box variances agree within statistical error
    double var_l = 0.0, var_r = 0.0;
    for (const auto& smp : samples) {
        const std::size_t half = smp.values.size() / 2;
        for (std::size_t i = 0; i < half; ++i) var_l += smp.values[i] * smp.values[i];
        for (std::size_t i = half; i < smp.values.size(); ++i) var_r += smp.values[i] * smp.values[i];
    }
    CHECK(var_l / var_r == Approx(1.0).epsilon(0.08));

    // gaussianity: excess kurtosis of the pooled values
    double m2 = 0.0, m4 = 0.0;
    std::size_t cnt = 0;
    for (const auto& smp : samples)
        for (double v : smp.values) {
            m2 += v * v;
            m4 += v * v * v * v;
            ++cnt;
        }
    m2 /= double(cnt);
    m4 /= double(cnt);
    CHECK(std::abs(m4 / (m2 * m2) - 3.0) < 0.1);

    for (const auto& smp : samples)
        for (double v : smp.values) REQUIRE(std::isfinite(v));
}

TEST_CASE("empirical autocorrelation edge cases", "[potential]") {
    PotentialSpec s = small_spec();
    PotentialSample z1, z2;
    z1.spec = z2.spec = s;
    z1.values.assign(s.n_grid, 0.0);
    z2.values.assign(s.n_grid, 0.0);
    const auto corr = empirical_autocorrelation({z1, z2});
    for (double v : corr) CHECK(v == Approx(0.0).margin(1e-300));

    PotentialSample other = z2;
    other.spec.v0 *= 2.0;
    CHECK_THROWS_AS(empirical_autocorrelation({z1, other}), std::invalid_argument);
}

TEST_CASE("single-realization lag zero equals its variance", "[potential]") {
    const PotentialSpec s = small_spec();
    const PotentialSample a = sample_potential(s, 3);
    PotentialSample b = a;   // duplicate to satisfy the two-sample contract
    const auto corr = empirical_autocorrelation({a, b});
    double var = 0.0;
    for (double v : a.values) var += v * v;
    var /= double(a.values.size());
    CHECK(corr[0] == Approx(var).epsilon(1e-12));
}

TEST_CASE("raw dump format", "[potential]") {
    PotentialSpec s = small_spec();
    const PotentialSample a = sample_potential(s, 0);
    std::ostringstream os;
    dump_potential(a, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header.find("\"seed\":42") != std::string::npos);
    CHECK(header.find("\"realization_index\":0") != std::string::npos);
    double first;
    is >> first;
    CHECK(first == Approx(a.values[0]).epsilon(1e-15));
}
