#pragma once

// Gaussian-correlated random potentials on a periodic grid, sampled by
// spectral synthesis, plus the empirical statistics used for validation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "wploc/rng.hpp"

namespace wploc {

struct PotentialSpec {
    double v0 = 0.0325;        // potential strength, units sigma_c^-2
    double sigma_c = 1.0;      // correlation length, the global length unit
    double box_length = 200.0; // L
    std::uint64_t n_grid = 3200;
    std::uint64_t seed = 1;

    double grid_step() const { return box_length / double(n_grid); }
    bool weak_disorder() const { return v0 * sigma_c * sigma_c < 0.1; }

    void validate() const {
        if (!(v0 > 0.0)) throw std::invalid_argument("PotentialSpec: v0 must be positive");
        if (!(sigma_c > 0.0)) throw std::invalid_argument("PotentialSpec: sigma_c must be positive");
        if (!(box_length >= 50.0 * sigma_c))
            throw std::invalid_argument("PotentialSpec: box_length must be at least 50 sigma_c");
        if (!(grid_step() <= sigma_c / 8.0 + 1e-15))
            throw std::invalid_argument("PotentialSpec: grid step must not exceed sigma_c/8");
        if (n_grid < 2) throw std::invalid_argument("PotentialSpec: n_grid too small");
    }

    bool operator==(const PotentialSpec&) const = default;
};

struct PotentialSample {
    PotentialSpec spec;
    std::uint64_t realization_index = 0;
    std::vector<double> values;      // length n_grid
    bool spectrum_clipped = false;   // negative spectral weights were zeroed
};

// Two-point correlation V0^2 exp(-dx^2 / (2 sigma_c^2)) with the periodic
// wrapped distance.
inline double c2(double dx, const PotentialSpec& spec) {
    double d = std::fmod(std::abs(dx), spec.box_length);
    d = std::min(d, spec.box_length - d);
    const double r = d / spec.sigma_c;
    return spec.v0 * spec.v0 * std::exp(-0.5 * r * r);
}

namespace detail {

inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwRealBuf {
    double* p = nullptr;
    explicit FftwRealBuf(std::size_t n) : p(fftw_alloc_real(n)) {}
    ~FftwRealBuf() { fftw_free(p); }
    FftwRealBuf(const FftwRealBuf&) = delete;
    FftwRealBuf& operator=(const FftwRealBuf&) = delete;
};

struct FftwCplxBuf {
    fftw_complex* p = nullptr;
    explicit FftwCplxBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
    ~FftwCplxBuf() { fftw_free(p); }
    FftwCplxBuf(const FftwCplxBuf&) = delete;
    FftwCplxBuf& operator=(const FftwCplxBuf&) = delete;
};

// Discrete power spectrum: forward transform of the periodized correlation.
// The Gaussian spectrum is positive; any rounding-negative weight is clipped.
inline std::vector<double> correlation_spectrum(const PotentialSpec& spec, bool* clipped) {
    const std::size_t n = spec.n_grid;
    FftwRealBuf in(n);
    FftwCplxBuf out(n / 2 + 1);
    const double h = spec.grid_step();
    for (std::size_t j = 0; j < n; ++j) in.p[j] = c2(double(j) * h, spec);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_r2c_1d(int(n), in.p, out.p, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<double> s(n / 2 + 1);
    bool clip = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        double v = out.p[k][0];
        if (v < 0.0) { v = 0.0; clip = true; }
        s[k] = v;
    }
    if (clipped) *clipped = clip;
    return s;
}

} // namespace detail

// Spectral synthesis: independent Hermitian complex Gaussians per Fourier
// mode, scaled by the square root of the discrete power spectrum. The
// ensemble autocorrelation equals the periodized target correlation exactly.
// Pure function of (spec.seed, realization_index).
inline PotentialSample sample_potential(const PotentialSpec& spec, std::uint64_t realization_index) {
    spec.validate();
    const std::size_t n = spec.n_grid;
    PotentialSample sample;
    sample.spec = spec;
    sample.realization_index = realization_index;

    std::vector<double> s = detail::correlation_spectrum(spec, &sample.spectrum_clipped);

    GaussianStream rng(spec.seed, realization_index);
    detail::FftwCplxBuf modes(n / 2 + 1);
    const double inv_n = 1.0 / double(n);
    // target field = (1/n) sum_k sqrt(n S_k) zeta_k e^{2 pi i k m / n}; the
    // unnormalized c2r transform supplies the sum, so load sqrt(S_k / n).
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double amp = std::sqrt(s[k] * inv_n);
        if (k == 0 || (n % 2 == 0 && k == n / 2)) {
            modes.p[k][0] = amp * rng.gaussian();
            modes.p[k][1] = 0.0;
        } else {
            const double g1 = rng.gaussian();
            const double g2 = rng.gaussian();
            modes.p[k][0] = amp * g1 * M_SQRT1_2;
            modes.p[k][1] = amp * g2 * M_SQRT1_2;
        }
    }
    detail::FftwRealBuf field(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan = fftw_plan_dft_c2r_1d(int(n), modes.p, field.p, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    sample.values.assign(field.p, field.p + n);
    return sample;
}

// Circular autocorrelation averaged over realizations and grid positions.
inline std::vector<double> empirical_autocorrelation(const std::vector<PotentialSample>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("empirical_autocorrelation: need at least 2 samples");
    const PotentialSpec& spec = samples.front().spec;
    for (const auto& s : samples)
        if (!(s.spec == spec)) throw std::invalid_argument("empirical_autocorrelation: mismatched specs");
    const std::size_t n = spec.n_grid;
    detail::FftwRealBuf in(n);
    detail::FftwCplxBuf freq(n / 2 + 1);
    detail::FftwRealBuf back(n);
    fftw_plan fwd, inv;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fwd = fftw_plan_dft_r2c_1d(int(n), in.p, freq.p, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(int(n), freq.p, back.p, FFTW_ESTIMATE);
    }
    std::vector<double> acc(n, 0.0);
    for (const auto& s : samples) {
        std::copy(s.values.begin(), s.values.end(), in.p);
        fftw_execute(fwd);
        for (std::size_t k = 0; k <= n / 2; ++k) {
            const double p2 = freq.p[k][0] * freq.p[k][0] + freq.p[k][1] * freq.p[k][1];
            freq.p[k][0] = p2;
            freq.p[k][1] = 0.0;
        }
        fftw_execute(inv);
        // |F|^2 back-transform carries n^2; one n normalizes the transform
        // pair, the other averages over grid positions.
        const double norm = 1.0 / (double(n) * double(n));
        for (std::size_t j = 0; j < n; ++j) acc[j] += back.p[j] * norm;
    }
    {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    for (auto& v : acc) v /= double(samples.size());
    return acc;
}

// Raw dump: single JSON header line (spec + index), then one value per line.
inline void dump_potential(const PotentialSample& s, std::ostream& os) {
    os.precision(17);
    os << "{\"v0\":" << s.spec.v0 << ",\"sigma_c\":" << s.spec.sigma_c
       << ",\"box_length\":" << s.spec.box_length << ",\"n_grid\":" << s.spec.n_grid
       << ",\"seed\":" << s.spec.seed << ",\"realization_index\":" << s.realization_index << "}\n";
    for (double v : s.values) os << v << "\n";
}

inline void dump_potential(const PotentialSample& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("dump_potential: cannot open " + path);
    dump_potential(s, f);
}

} // namespace wploc
