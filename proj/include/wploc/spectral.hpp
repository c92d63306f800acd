#pragma once

// Self-energy of the disorder-averaged propagator (Born and partially
// self-consistent Born), the spectral function, the initial state's Wigner
// function and the wave-packet energy distribution P(E).

#include <cmath>
#include <complex>
#include <stdexcept>

#include "wploc/lyapunov.hpp"
#include "wploc/special.hpp"

namespace wploc {

struct WavePacketSpec {
    double a = M_SQRT2;   // initial Gaussian width

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("WavePacketSpec: a must be positive");
    }
    // localization lengths should stay large compared to a at the packet's
    // typical energy 1/a^2
    bool narrow_packet_ok(const DisorderModel& m) const {
        return a * gamma_model(1.0 / (a * a), m) <= 0.1;
    }
};

// Prefactor convention for d(E). Quadrature of the defining integral
// int C2(x) e^{i p_E x} G0+(x, E) dx fixes the prefactor of the closed form
// to sqrt(pi/8) sigma_c V0^2; that value is also the one consistent with
// the mean-free-path identities, so it is the default. The variant with
// pi/4 (a factor sqrt(pi/2) larger) is kept selectable for comparison.
enum class DConvention { half_line, quarter_pi };

// d(E) = pref * [1 + e^{-2 E sigma^2} (1 + i erfi(sqrt(2E) sigma))],
// continued to E < 0 through erfi(ix) = i erf(x), where the bracket becomes
// 1 + erfcx(sqrt(-2E) sigma), manifestly real and overflow-free.
inline cplx d_of_E(double E, const DisorderModel& m, DConvention conv = DConvention::half_line) {
    m.validate();
    if (!std::isfinite(E)) throw std::invalid_argument("d_of_E: non-finite E");
    const double sc = m.sigma_c;
    const double pref = (conv == DConvention::half_line ? std::sqrt(M_PI / 8.0) : M_PI / 4.0) *
                        sc * m.v0 * m.v0;
    if (E >= 0.0) {
        const double s = std::sqrt(2.0 * E) * sc;
        const double damp = std::exp(-2.0 * E * sc * sc);
        return pref * cplx(1.0 + damp, damp * erfi_real(s));
    }
    const double s = std::sqrt(-2.0 * E) * sc;
    return {pref * (1.0 + erfcx(s)), 0.0};
}

enum class SelfEnergyBranch { born, scba };

struct SelfEnergy {
    cplx value{0.0, 0.0};
    double residual = 0.0;   // |Sigma - d / (i sqrt(E - Sigma))|
    SelfEnergyBranch branch = SelfEnergyBranch::scba;
};

// Plain Born self-energy d(E)/(i sqrt(E)); diverges like 1/sqrt(E) at E -> 0+.
inline SelfEnergy sigma_born(double E, const DisorderModel& m,
                             DConvention conv = DConvention::half_line) {
    if (!(E > 0.0)) throw std::domain_error("sigma_born: requires E > 0");
    const cplx d = d_of_E(E, m, conv);
    SelfEnergy s;
    s.value = d / cplx(0.0, std::sqrt(E));
    s.branch = SelfEnergyBranch::born;
    s.residual = 0.0;
    return s;
}

namespace detail {

// All three roots of S^3 - E S^2 - d^2 = 0 via the depressed-cubic closed
// form in complex arithmetic.
inline void cubic_roots(double E, cplx d2, cplx out[3]) {
    const cplx p = cplx(-E * E / 3.0, 0.0);
    const cplx q = cplx(-2.0 * E * E * E / 27.0, 0.0) - d2;
    cplx sq = std::sqrt(q * q * 0.25 + p * p * p / 27.0);
    cplx u3 = -q * 0.5 + sq;
    if (std::abs(u3) < std::abs(-q * 0.5 - sq)) u3 = -q * 0.5 - sq;
    const cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx w1(-0.5, 0.5 * std::sqrt(3.0)), w2(-0.5, -0.5 * std::sqrt(3.0));
    const cplx shift(E / 3.0, 0.0);
    auto root = [&](cplx uu) {
        const cplx t = std::abs(uu) > 0.0 ? uu - p / (3.0 * uu) : cplx(0.0, 0.0);
        return t + shift;
    };
    out[0] = root(u);
    out[1] = root(u * w1);
    out[2] = root(u * w2);
}

inline cplx fixed_point_residual(double E, cplx d, cplx S) {
    return S - d / (cplx(0.0, 1.0) * principal_sqrt(cplx(E, 0.0) - S));
}

} // namespace detail

// Self-consistent Born self-energy: unique solution of
// Sigma = d(E) / (i sqrt(E - Sigma)) with Im Sigma < 0 where one exists.
// Solved through the equivalent cubic Sigma^3 - E Sigma^2 - d^2 = 0; roots
// violating the unsquared equation under the principal square root are
// discarded. Below the spectral support edge all surviving roots are real;
// the branch continuously connected from above (the one vanishing as
// V0 -> 0) is the largest of them.
inline SelfEnergy sigma_scba(double E, const DisorderModel& m,
                             DConvention conv = DConvention::half_line) {
    if (!std::isfinite(E)) throw std::invalid_argument("sigma_scba: non-finite E");
    const cplx d = d_of_E(E, m, conv);
    const double dscale = std::pow(std::abs(d), 2.0 / 3.0);
    cplx roots[3];
    detail::cubic_roots(E, d * d, roots);

    cplx neg_root(0.0, 0.0), real_root(0.0, 0.0);
    bool has_neg = false, has_real = false;
    const double itol = 1e-13 * dscale;
    for (const cplx& r0 : roots) {
        cplx r = r0;
        // one fixed-point Newton polish when safely away from the fold
        const cplx g = detail::fixed_point_residual(E, d, r);
        const cplx dg = 1.0 + r / (2.0 * (cplx(E, 0.0) - r));
        if (std::abs(dg) > 0.25) {
            const cplx r2 = r - g / dg;
            if (std::abs(detail::fixed_point_residual(E, d, r2)) < std::abs(g)) r = r2;
        }
        if (std::abs(detail::fixed_point_residual(E, d, r)) > 1e-8 * std::max(dscale, std::abs(r)))
            continue;
        if (r.imag() < -itol) {
            if (!has_neg || r.imag() < neg_root.imag()) { neg_root = r; has_neg = true; }
        } else {
            // real up to rounding; the physical continuation below the edge
            // is the largest of the surviving real roots
            if (!has_real || r.real() > real_root.real()) { real_root = r; has_real = true; }
        }
    }
    if (!has_neg && !has_real) throw std::logic_error("sigma_scba: no root satisfies the fixed point");
    cplx best = has_neg ? neg_root : cplx(real_root.real(), 0.0);

    SelfEnergy s;
    s.value = best;
    s.branch = SelfEnergyBranch::scba;
    s.residual = std::abs(detail::fixed_point_residual(E, d, best));
    return s;
}

// Lower edge of the SCBA spectral support: below it Sigma is real and the
// spectral weight vanishes. Located by bisection on Im Sigma.
inline double scba_support_edge(const DisorderModel& m,
                                DConvention conv = DConvention::half_line) {
    m.validate();
    auto has_width = [&](double E) { return sigma_scba(E, m, conv).value.imag() < 0.0; };
    double hi = 0.0;                       // Sigma(0) = d^{2/3} e^{-2 pi i/3}: complex
    double lo = -std::pow(std::abs(d_of_E(0.0, m, conv)), 2.0 / 3.0) * 4.0;
    while (has_width(lo)) lo *= 2.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (has_width(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Spectral function A(p, E) = -(1/pi) Im[ 1 / (E - p^2 - Sigma(E)) ] >= 0.
inline double spectral_function(double p, double E, const DisorderModel& m,
                                DConvention conv = DConvention::half_line) {
    const cplx S = sigma_scba(E, m, conv).value;
    const cplx g = 1.0 / (cplx(E - p * p, 0.0) - S);
    const double a = -g.imag() / M_PI;
    return a > 0.0 ? a : 0.0;
}

// Normalized Wigner function of the initial Gaussian packet,
// W(q, p) = (1/pi) e^{-a^2 p^2 - q^2 / a^2}, integrating to one.
inline double wigner(double q, double p, const WavePacketSpec& wp) {
    wp.validate();
    const double a = wp.a;
    return std::exp(-a * a * p * p - q * q / (a * a)) / M_PI;
}

// Energy distribution of the wave packet:
//   P(E) = (a/sqrt(pi)) Re[ w(a z) / z ],  z = sqrt(E - Sigma(E)), Im z >= 0,
// equivalent to the erfc form but evaluated through the Faddeeva function,
// which is stable for all arguments. Zero below the SCBA support edge.
inline double energy_distribution_given_sigma(double E, const WavePacketSpec& wp, cplx sigma) {
    wp.validate();
    cplx z = principal_sqrt(cplx(E, 0.0) - sigma);
    if (z.imag() < 0.0) z = -z;
    if (std::abs(z) == 0.0) return 0.0;
    // purely imaginary z (below the support edge) makes Re[w(az)/z] vanish
    const double a = wp.a;
    const cplx val = faddeeva_w(a * z) / z;
    const double p = a / std::sqrt(M_PI) * val.real();
    return p > 0.0 ? p : 0.0;
}

inline double energy_distribution(double E, const WavePacketSpec& wp, const DisorderModel& m,
                                  DConvention conv = DConvention::half_line) {
    return energy_distribution_given_sigma(E, wp, sigma_scba(E, m, conv).value);
}

// Free-particle energy distribution. The default is the V0 -> 0 limit of
// the interacting expression, a e^{-a^2 E} / sqrt(pi E). The half-exponent
// variant a e^{-a^2 E/2} / sqrt(2 pi E) (the same law with a -> a/sqrt(2))
// is kept selectable for figure comparison; both integrate to one.
enum class FreeDistributionVariant { consistent_limit, half_exponent };

inline double free_energy_distribution(double E, const WavePacketSpec& wp,
                                       FreeDistributionVariant variant =
                                           FreeDistributionVariant::consistent_limit) {
    wp.validate();
    if (!(E > 0.0)) throw std::domain_error("free_energy_distribution: requires E > 0");
    const double a = wp.a;
    if (variant == FreeDistributionVariant::consistent_limit)
        return a * std::exp(-a * a * E) / std::sqrt(M_PI * E);
    return a * std::exp(-0.5 * a * a * E) / std::sqrt(2.0 * M_PI * E);
}

} // namespace wploc
