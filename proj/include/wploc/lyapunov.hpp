#pragma once

// Lyapunov exponents of the 1D disordered Schrodinger operator
// H = p^2 + V(x) in units hbar = 2m = 1: weak-disorder (Born) form, the
// exact white-noise expression with locally matched noise strength, the
// Halperin cumulative density of states, the Thouless dispersion-relation
// cross-check and a transfer-matrix estimator.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wploc/potential.hpp"
#include "wploc/quadrature.hpp"
#include "wploc/special.hpp"

namespace wploc {

struct DisorderModel {
    double v0 = 0.0325;
    double sigma_c = 1.0;

    void validate() const {
        if (!(v0 > 0.0) || !(sigma_c > 0.0))
            throw std::invalid_argument("DisorderModel: v0 and sigma_c must be positive");
    }
    double energy_scale() const {   // (sigma_c v0^2)^(2/3), Born validity edge
        return std::pow(sigma_c * v0 * v0, 2.0 / 3.0);
    }
};

enum class LyapunovMethod { born, white_noise_exact, transfer_matrix, thouless_kk };

struct LyapunovResult {
    double gamma = 0.0;
    LyapunovMethod method = LyapunovMethod::born;
    double stderr_ = 0.0;     // 0 for analytic methods
    bool converged = true;
};

// Weak-disorder Lyapunov exponent sqrt(pi/2) sigma_c V0^2 e^{-2 sigma_c^2 E} / (4E).
// Diverges as E -> 0+; negative energies are rejected rather than continued.
inline double gamma_born(double E, const DisorderModel& m) {
    m.validate();
    if (!(E > 0.0)) throw std::domain_error("gamma_born: requires E > 0");
    const double s2E = m.sigma_c * m.sigma_c * E;
    return std::sqrt(M_PI / 2.0) * m.sigma_c * m.v0 * m.v0 * std::exp(-2.0 * s2E) / (4.0 * E);
}

// White-noise strength matched so the exact white-noise exponent reproduces
// the Born value at high energy: D = 2 int C2(x) cos(2 p_E x) dx, finite for
// all real E.
inline double matched_noise_strength(double E, const DisorderModel& m) {
    m.validate();
    if (!std::isfinite(E)) throw std::invalid_argument("matched_noise_strength: non-finite E");
    return std::sqrt(M_PI / 2.0) * 4.0 * m.sigma_c * m.v0 * m.v0 *
           std::exp(-2.0 * m.sigma_c * m.sigma_c * E);
}

// Exact white-noise Lyapunov exponent, gamma = (D/4)^(1/3) M'(y)/M(y) at
// y = -E (16/D^2)^(1/3). The overall sign is calibrated once against the
// high-energy limit D/(16E) and the free tunneling limit sqrt(-E); with
// M' = dM/dy both limits demand the + sign.
inline constexpr double kWhiteNoiseSign = +1.0;

inline double gamma_white_noise(double E, double D) {
    if (!(D > 0.0)) throw std::domain_error("gamma_white_noise: requires D > 0");
    const double y = -E * std::cbrt(16.0 / (D * D));
    return kWhiteNoiseSign * std::cbrt(D / 4.0) * m_log_derivative(y);
}

// Lyapunov exponent of the correlated model: white-noise exact expression
// with the locally matched strength. Finite and positive for all E.
inline double gamma_model(double E, const DisorderModel& m) {
    return gamma_white_noise(E, matched_noise_strength(E, m));
}

// Halperin's average cumulative density of states for white noise.
inline double cumulative_dos_white_noise(double E, double D) {
    if (!(D > 0.0)) throw std::domain_error("cumulative_dos_white_noise: requires D > 0");
    const double y = -E * std::cbrt(16.0 / (D * D));
    const double pref = std::cbrt(D / 4.0);
    if (y <= 20.0) {
        const AiryPair p = airy_pair(y);
        return pref / (M_PI * M_PI * (p.ai * p.ai + p.bi * p.bi));
    }
    // log-ratio form deep in the Lifshitz tail: M^2 ~ Bi^2 = e^{2 zeta} Su^2/(pi sqrt(y))
    const double zeta = (2.0 / 3.0) * y * std::sqrt(y);
    double su = 0.0, zp = 1.0, prev = 1e308;
    for (int k = 0; k < 40; ++k) {
        double u, v;
        detail::airy_uv(k, u, v);
        if (std::abs(u / zp) > prev) break;
        prev = std::abs(u / zp);
        su += u / zp;
        zp *= zeta;
        if (prev < 1e-18) break;
    }
    const double ln_n = std::log(pref) - 2.0 * zeta - 2.0 * std::log(su) -
                        std::log(M_PI) + 0.5 * std::log(y);
    return std::exp(ln_n);
}

struct ThoulessResult {
    double gamma = 0.0;
    double quadrature_error = 0.0;
};

// Dispersion-relation (Kramers-Kronig) reconstruction of the white-noise
// Lyapunov exponent from the cumulative density of states:
//   gamma(E) = gamma0(E) + P int dE' (N(E') - N0(E')) / (E - E').
// Cross-check only; agrees with gamma_white_noise to quadrature accuracy.
inline ThoulessResult thouless_kk_check(double E, double D) {
    if (!(D > 0.0)) throw std::domain_error("thouless_kk_check: requires D > 0");
    const double scale = std::cbrt(D / 4.0);
    const double e_scale = scale * scale;
    if (std::abs(E) > 50.0 * e_scale)
        throw std::domain_error("thouless_kk_check: |E| outside the supported window");
    auto dN = [&](double Ep) {
        const double n0 = Ep > 0.0 ? std::sqrt(Ep) / M_PI : 0.0;
        return cumulative_dos_white_noise(Ep, D) - n0;
    };
    // integrand support: Lifshitz tail dies fast below, algebraic E'^{-5/2} above
    double lo = -8.0 * e_scale;
    while (std::abs(dN(lo)) > 1e-14 * scale && lo > -60.0 * e_scale) lo -= 2.0 * e_scale;
    double hi = 60.0 * e_scale;
    while (std::abs(dN(hi)) > 1e-13 * scale && hi < 1e5 * e_scale) hi *= 1.6;

    const double gamma0 = E < 0.0 ? std::sqrt(-E) : 0.0;
    // PV kernel 1/(E - E'); note pv_integral integrates f(x)/(x - pole)
    auto neg = [&](double Ep) { return -dN(Ep); };
    double val = 0.0, err = 0.0;
    const double kink = 0.0;    // N0 has a sqrt kink at E' = 0
    if (std::abs(E - kink) > 1e-9 * e_scale) {
        // split at the kink so each PV piece sees a smooth integrand
        if (E > kink) {
            QuadResult left = integrate([&](double x) { return neg(x) / (x - E); }, lo, kink, 1e-13, 1e-11);
            PvResult pv = pv_integral(neg, E, kink, hi, 1e-3 * e_scale);
            val = left.value + pv.value;
            err = left.error + pv.error;
        } else {
            PvResult pv = pv_integral(neg, E, lo, kink, 1e-3 * e_scale);
            QuadResult right = integrate([&](double x) { return neg(x) / (x - E); }, kink, hi, 1e-13, 1e-11);
            val = pv.value + right.value;
            err = pv.error + right.error;
        }
    } else {
        PvResult pv = pv_integral(neg, E, lo, hi, 1e-3 * e_scale);
        val = pv.value;
        err = pv.error;
    }
    return {gamma0 + val, err};
}

// Mean free paths from half-line integrals of the correlation function:
//   1/l+         = (1/2E) int_0^inf C2(x) dx
//   1/l- + i/l0  = (1/2E) int_0^inf C2(x) e^{2 i p_E x} dx
struct MeanFreePaths {
    double ell_plus, ell_minus, ell_zero;
    double inv_plus, inv_minus, inv_zero;
};

inline MeanFreePaths mean_free_paths(double E, const DisorderModel& m) {
    m.validate();
    if (!(E > 0.0)) throw std::domain_error("mean_free_paths: requires E > 0");
    const double sc = m.sigma_c, v2 = m.v0 * m.v0;
    const double base = std::sqrt(M_PI / 2.0) * sc * v2 / (2.0 * E);
    const double damp = std::exp(-2.0 * sc * sc * E);
    MeanFreePaths r;
    r.inv_plus = base;
    r.inv_minus = base * damp;
    r.inv_zero = base * damp * erfi_real(std::sqrt(2.0 * E) * sc);
    r.ell_plus = 1.0 / r.inv_plus;
    r.ell_minus = 1.0 / r.inv_minus;
    r.ell_zero = r.inv_zero != 0.0 ? 1.0 / r.inv_zero : std::numeric_limits<double>::infinity();
    return r;
}

// Complex effective wave vector of the disorder-averaged propagator,
// p~ = p_E + i/(2 l-) + i/(2 l+) - 1/(2 l0).
inline cplx effective_wavevector(double E, const DisorderModel& m) {
    const MeanFreePaths f = mean_free_paths(E, m);
    return cplx(std::sqrt(E) - 0.5 * f.inv_zero, 0.5 * (f.inv_minus + f.inv_plus));
}

// Transfer-matrix estimate of gamma(E): three-term recursion
// psi_{n+1} = (2 + h^2 (V_n - E)) psi_n - psi_{n-1}, log-norms accumulated
// with renormalization every 32 steps, averaged over realizations.
inline LyapunovResult gamma_transfer_matrix(const PotentialSpec& spec, double E,
                                            std::uint64_t n_steps, std::uint64_t n_real,
                                            unsigned n_threads = 1) {
    spec.validate();
    if (n_steps > spec.n_grid)
        throw std::invalid_argument("gamma_transfer_matrix: n_steps exceeds the sampled grid");
    if (n_real < 1) throw std::invalid_argument("gamma_transfer_matrix: need n_real >= 1");
    const double h = spec.grid_step();
    const double limit = std::min(spec.sigma_c, 2.0 * M_PI / std::sqrt(std::abs(E) + 1e-300)) / 16.0;
    if (h > limit * (1.0 + 1e-12))
        throw std::invalid_argument("gamma_transfer_matrix: grid step too coarse for this energy");

    std::vector<double> per_real(n_real, 0.0);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t r = next.fetch_add(1);
            if (r >= n_real) break;
            const PotentialSample s = sample_potential(spec, r);
            double prev = 1.0, cur = 1.0;   // generic initial direction
            double log_norm = 0.0;
            const double h2 = h * h;
            for (std::uint64_t i = 0; i < n_steps; ++i) {
                const double nxt = (2.0 + h2 * (s.values[i] - E)) * cur - prev;
                prev = cur;
                cur = nxt;
                if ((i & 31u) == 31u) {
                    const double norm = std::sqrt(cur * cur + prev * prev);
                    log_norm += std::log(norm);
                    cur /= norm;
                    prev /= norm;
                }
            }
            const double norm = std::sqrt(cur * cur + prev * prev);
            log_norm += std::log(norm);
            per_real[r] = log_norm / (double(n_steps) * h);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    double mean = 0.0;
    for (double g : per_real) mean += g;
    mean /= double(n_real);
    double var = 0.0;
    for (double g : per_real) var += (g - mean) * (g - mean);
    LyapunovResult res;
    res.gamma = mean;
    res.method = LyapunovMethod::transfer_matrix;
    res.stderr_ = n_real > 1 ? std::sqrt(var / (double(n_real) * double(n_real - 1))) : 0.0;
    res.converged = !(res.stderr_ > 0.1 * std::abs(mean));
    return res;
}

} // namespace wploc
