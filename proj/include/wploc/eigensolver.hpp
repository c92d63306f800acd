#pragma once

// Finite-difference discretization of H = p^2 + V(x) on the periodic grid,
// dense symmetric diagonalization, and the per-realization observables
// extracted from the full eigenbasis: asymptotic density, energy
// distribution and windowed densities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <lapacke.h>

#include "wploc/potential.hpp"
#include "wploc/profile.hpp"
#include "wploc/spectral.hpp"

namespace wploc {

struct GridHamiltonian {
    std::size_t n = 0;
    double h = 0.0;            // grid step
    double box_length = 0.0;
    std::vector<double> dense; // column-major, symmetric
};

// Central 3-point kinetic stencil plus diagonal potential, periodic corners.
inline GridHamiltonian build_hamiltonian(const PotentialSample& s) {
    const PotentialSpec& spec = s.spec;
    if (!(spec.grid_step() <= spec.sigma_c / 8.0 + 1e-15))
        throw std::invalid_argument("build_hamiltonian: grid too coarse (need h <= sigma_c/8)");
    const std::size_t n = spec.n_grid;
    GridHamiltonian H;
    H.n = n;
    H.h = spec.grid_step();
    H.box_length = spec.box_length;
    H.dense.assign(n * n, 0.0);
    const double k = 1.0 / (H.h * H.h);
    for (std::size_t i = 0; i < n; ++i) {
        H.dense[i + i * n] = 2.0 * k + s.values[i];
        const std::size_t j = (i + 1) % n;
        H.dense[i + j * n] = -k;
        H.dense[j + i * n] = -k;
    }
    return H;
}

struct EigenSolution {
    std::size_t n = 0;
    double h = 0.0;
    double box_length = 0.0;
    std::vector<double> energies;  // ascending
    std::vector<double> states;    // column-major; column m has sum v^2 = 1,
                                   // grid-orthonormal states are v / sqrt(h)

    double state(std::size_t grid_i, std::size_t level) const {
        return states[grid_i + level * n] / std::sqrt(h);
    }
    double x_of(std::size_t grid_i) const { return -0.5 * box_length + double(grid_i) * h; }

    // <phi_m | psi> with the grid inner product h * sum
    std::vector<double> overlaps(const std::vector<double>& psi) const {
        std::vector<double> c(n, 0.0);
        const double sq = std::sqrt(h);
        for (std::size_t m = 0; m < n; ++m) {
            const double* col = states.data() + m * n;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += col[i] * psi[i];
            c[m] = acc * sq;
        }
        return c;
    }

    double min_level_spacing() const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < energies.size(); ++i)
            d = std::min(d, energies[i + 1] - energies[i]);
        return d;
    }
};

// Full symmetric eigendecomposition (divide and conquer); consumes the
// Hamiltonian buffer.
inline EigenSolution diagonalize(GridHamiltonian&& H) {
    if (H.n > 5000) throw std::invalid_argument("diagonalize: dimension above the dense-solver budget");
    EigenSolution sol;
    sol.n = H.n;
    sol.h = H.h;
    sol.box_length = H.box_length;
    sol.energies.assign(H.n, 0.0);
    const lapack_int n = lapack_int(H.n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                           H.dense.data(), n, sol.energies.data());
    if (info != 0) {
        double dmin = 1e308, dmax = -1e308;
        for (std::size_t i = 0; i < H.n; ++i) {
            dmin = std::min(dmin, H.dense[i + i * H.n]);
            dmax = std::max(dmax, H.dense[i + i * H.n]);
        }
        std::ostringstream os;
        os << "diagonalize: dsyevd failed with info=" << info
           << " (n=" << H.n << ", diag range [" << dmin << ", " << dmax << "])";
        throw std::runtime_error(os.str());
    }
    sol.states = std::move(H.dense);
    return sol;
}

// Initial Gaussian packet sampled at the grid points and renormalized so the
// discrete completeness sum is exact.
inline std::vector<double> initial_packet_on_grid(const WavePacketSpec& wp, std::size_t n,
                                                  double h, double box_length) {
    wp.validate();
    if (!(wp.a >= 4.0 * h))
        throw std::invalid_argument("initial_packet_on_grid: packet narrower than 4 grid steps");
    std::vector<double> psi(n);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -0.5 * box_length + double(i) * h;
        psi[i] = std::exp(-x * x / (2.0 * wp.a * wp.a));
        norm2 += psi[i] * psi[i];
    }
    const double norm = 1.0 / std::sqrt(norm2 * h);
    for (auto& v : psi) v *= norm;
    return psi;
}

struct NumericDensity {
    DensityProfile profile;
    bool near_degenerate = false;   // min level spacing below 1e-12
};

// n(x_i) = sum_m |phi_m(x_i)|^2 |<phi_m|psi0>|^2.
inline NumericDensity numeric_density(const EigenSolution& sol, const WavePacketSpec& wp) {
    const std::vector<double> psi = initial_packet_on_grid(wp, sol.n, sol.h, sol.box_length);
    const std::vector<double> c = sol.overlaps(psi);
    NumericDensity out;
    out.near_degenerate = sol.min_level_spacing() < 1e-12;
    out.profile.x_grid.resize(sol.n);
    out.profile.values.assign(sol.n, 0.0);
    for (std::size_t i = 0; i < sol.n; ++i) out.profile.x_grid[i] = sol.x_of(i);
    const double invh = 1.0 / sol.h;
    for (std::size_t m = 0; m < sol.n; ++m) {
        const double w = c[m] * c[m] * invh;
        if (w == 0.0) continue;
        const double* col = sol.states.data() + m * sol.n;
        double* dst = out.profile.values.data();
        for (std::size_t i = 0; i < sol.n; ++i) dst[i] += w * col[i] * col[i];
    }
    double mass = 0.0;
    for (double v : out.profile.values) mass += v;
    out.profile.mass = mass * sol.h;
    out.profile.mass_target = 1.0;
    return out;
}

// Restricted to eigenenergies in (E_lo, E_hi]; windows that partition the
// real line recompose the full density exactly.
inline DensityProfile numeric_windowed_density(const EigenSolution& sol, const WavePacketSpec& wp,
                                               std::pair<double, double> window) {
    if (!(window.first < window.second))
        throw std::invalid_argument("numeric_windowed_density: window must be ordered");
    const std::vector<double> psi = initial_packet_on_grid(wp, sol.n, sol.h, sol.box_length);
    const std::vector<double> c = sol.overlaps(psi);
    DensityProfile prof;
    prof.x_grid.resize(sol.n);
    for (std::size_t i = 0; i < sol.n; ++i) prof.x_grid[i] = sol.x_of(i);
    prof.values.assign(sol.n, 0.0);
    const double invh = 1.0 / sol.h;
    double weight = 0.0;
    for (std::size_t m = 0; m < sol.n; ++m) {
        if (!(sol.energies[m] > window.first && sol.energies[m] <= window.second)) continue;
        const double w = c[m] * c[m] * invh;
        weight += c[m] * c[m];
        const double* col = sol.states.data() + m * sol.n;
        for (std::size_t i = 0; i < sol.n; ++i) prof.values[i] += w * col[i] * col[i];
    }
    double mass = 0.0;
    for (double v : prof.values) mass += v;
    prof.mass = mass * sol.h;
    prof.mass_target = weight;
    prof.empty_window = weight == 0.0;
    return prof;
}

struct EnergyHistogram {
    std::vector<double> bin_edges;   // size nbins + 1
    std::vector<double> density;     // normalized to unit integral
    std::vector<double> smoothed;    // zero-phase EMA over the bin index
    double total_weight = 0.0;       // completeness check, should be ~1
    double weight_below(double E) const {
        double acc = 0.0;
        for (std::size_t b = 0; b + 1 < bin_edges.size(); ++b)
            if (bin_edges[b + 1] <= E) acc += density[b] * (bin_edges[b + 1] - bin_edges[b]);
        return acc;
    }
};

// Spectral weights |<phi_m|psi0>|^2 histogrammed over E_m. The smoothed
// curve applies an exponential moving average (constant alpha) forward and
// backward over the bin index and averages the two passes, which cancels
// the single-pass lag.
inline EnergyHistogram numeric_energy_distribution(const EigenSolution& sol,
                                                   const WavePacketSpec& wp,
                                                   std::vector<double> bin_edges,
                                                   double smoothing = 0.007) {
    if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end()))
        throw std::invalid_argument("numeric_energy_distribution: need sorted bin edges");
    const std::vector<double> psi = initial_packet_on_grid(wp, sol.n, sol.h, sol.box_length);
    const std::vector<double> c = sol.overlaps(psi);
    EnergyHistogram hist;
    hist.bin_edges = std::move(bin_edges);
    hist.density.assign(hist.bin_edges.size() - 1, 0.0);
    for (std::size_t m = 0; m < sol.n; ++m) {
        const double w = c[m] * c[m];
        hist.total_weight += w;
        const auto it = std::upper_bound(hist.bin_edges.begin(), hist.bin_edges.end(), sol.energies[m]);
        if (it == hist.bin_edges.begin() || it == hist.bin_edges.end()) continue;
        hist.density[std::size_t(it - hist.bin_edges.begin()) - 1] += w;
    }
    // normalize to unit integral over the covered range
    double integral = 0.0;
    for (std::size_t b = 0; b < hist.density.size(); ++b)
        integral += hist.density[b];
    if (integral > 0.0)
        for (std::size_t b = 0; b < hist.density.size(); ++b)
            hist.density[b] /= integral * (hist.bin_edges[b + 1] - hist.bin_edges[b]);
    hist.smoothed = hist.density;
    if (smoothing > 0.0 && !hist.density.empty()) {
        std::vector<double> fwd(hist.density.size()), bwd(hist.density.size());
        double acc = hist.density.front();
        for (std::size_t b = 0; b < hist.density.size(); ++b)
            fwd[b] = acc = smoothing * hist.density[b] + (1.0 - smoothing) * acc;
        acc = hist.density.back();
        for (std::size_t b = hist.density.size(); b-- > 0;)
            bwd[b] = acc = smoothing * hist.density[b] + (1.0 - smoothing) * acc;
        for (std::size_t b = 0; b < hist.density.size(); ++b)
            hist.smoothed[b] = 0.5 * (fwd[b] + bwd[b]);
    }
    return hist;
}

// Exponential-envelope decay rates of eigenstates with energies inside
// [E_lo, E_hi]: per state, regress ln|phi| against the wrapped distance from
// its peak over [fit_lo, fit_hi].
inline std::vector<double> envelope_decay_rates(const EigenSolution& sol, double E_lo,
                                                double E_hi, double fit_lo, double fit_hi) {
    std::vector<double> rates;
    for (std::size_t m = 0; m < sol.n; ++m) {
        if (!(sol.energies[m] >= E_lo && sol.energies[m] <= E_hi)) continue;
        const double* col = sol.states.data() + m * sol.n;
        std::size_t peak = 0;
        for (std::size_t i = 1; i < sol.n; ++i)
            if (col[i] * col[i] > col[peak] * col[peak]) peak = i;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < sol.n; ++i) {
            double d = std::abs(double(i) - double(peak)) * sol.h;
            d = std::min(d, sol.box_length - d);
            if (d < fit_lo || d > fit_hi) continue;
            const double a2 = col[i] * col[i];
            if (a2 < 1e-60) continue;
            const double y = 0.5 * std::log(a2);
            sx += d; sy += y; sxx += d * d; sxy += d * y;
            ++cnt;
        }
        if (cnt < 8) continue;
        const double denom = double(cnt) * sxx - sx * sx;
        if (denom <= 0.0) continue;
        rates.push_back(-(double(cnt) * sxy - sx * sy) / denom);
    }
    return rates;
}

} // namespace wploc
