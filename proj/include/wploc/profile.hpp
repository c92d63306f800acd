#pragma once

// Fixed-energy localized density (Gogolin's u-integral), its periodized
// form on a ring of circumference L, and the energy-integrated asymptotic
// wave-packet density with optional energy windows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wploc/lyapunov.hpp"
#include "wploc/quadrature.hpp"
#include "wploc/spectral.hpp"

namespace wploc {

namespace detail {

// sinh(pi u) / (1 + cosh(pi u))^2 rewritten with t = e^{-pi u}; exact and
// overflow-free for all u >= 0.
inline double gogolin_weight(double u) {
    const double t = std::exp(-M_PI * u);
    return 2.0 * t * (1.0 - t) / ((1.0 + t) * (1.0 + t) * (1.0 + t));
}

} // namespace detail

// Fixed-energy density at distance x from the source:
//   n_E(x) = (pi^2 g / 8) int_0^inf du u sinh(pi u) [(1+u^2)/(1+cosh pi u)]^2
//            exp(-(1+u^2) g |x| / 2).
// Adaptive quadrature, absolute tolerance ~1e-12 g.
inline double n_fixed_energy(double x, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("n_fixed_energy: requires gamma > 0");
    const double s = 0.5 * gamma * std::abs(x);
    auto f = [s](double u) {
        const double up = 1.0 + u * u;
        const double e = up * s;
        if (e > 745.0) return 0.0;
        return u * up * up * detail::gogolin_weight(u) * std::exp(-e);
    };
    // integrand dies like e^{-pi u - u^2 s}; 40 covers double precision
    QuadResult q = integrate_split(f, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0},
                                   1e-13, 1e-12);
    return (M_PI * M_PI / 8.0) * gamma * q.value;
}

// Small-argument expansion (2g/3)(1 - 2 g |x|), valid for g|x| < 0.05.
inline double n_fixed_energy_center_expansion(double x, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("n_fixed_energy_center_expansion: requires gamma > 0");
    const double gx = gamma * std::abs(x);
    if (gx >= 0.05)
        throw std::domain_error("n_fixed_energy_center_expansion: gamma |x| out of range");
    return (2.0 * gamma / 3.0) * (1.0 - 2.0 * gx);
}

namespace detail {

// Fixed composite Gauss rule over u for the profile integrator; validated
// against the adaptive path to ~1e-12.
struct GogolinNodes {
    std::vector<double> u, w, one_plus_u2;
    GogolinNodes() {
        const double edges[] = {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0,
                                4.0, 5.0, 6.0, 8.0, 10.0, 13.0, 16.0, 20.0,
                                26.0, 33.0, 40.0};
        for (std::size_t e = 0; e + 1 < std::size(edges); ++e) {
            const double a = edges[e], b = edges[e + 1];
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (int i = 0; i < 21; ++i) {
                const double ui = c + h * gl21_x[i];
                const double up = 1.0 + ui * ui;
                u.push_back(ui);
                w.push_back(h * gl21_w[i] * ui * up * up * gogolin_weight(ui));
                one_plus_u2.push_back(up);
            }
        }
    }
};

inline const GogolinNodes& gogolin_nodes() {
    static const GogolinNodes n;
    return n;
}

// Periodized exponential kernel sum_j e^{-k |x + jL|} in closed form,
// |x| <= L/2. Exact for every decay rate, including kL << 1 where the sum
// approaches the uniform value 2/(kL).
inline double periodized_exp(double absx, double k, double L) {
    const double kl = k * L;
    const double direct = k * absx > 745.0 ? 0.0 : std::exp(-k * absx);
    if (k * (L - absx) > 745.0) return direct;
    if (kl > 36.0)
        return direct + std::exp(-k * (L - absx)) + std::exp(-k * (L + absx));
    return direct + 2.0 * std::cosh(k * absx) / std::expm1(kl);
}

} // namespace detail

// Periodized fixed-energy density sum_j n_E(x + jL) via the closed-form
// image sum inside the u-integral.
inline double n_fixed_energy_periodized(double x, double gamma, double L) {
    if (!(gamma > 0.0)) throw std::domain_error("n_fixed_energy_periodized: requires gamma > 0");
    if (!(L > 0.0)) throw std::domain_error("n_fixed_energy_periodized: requires L > 0");
    double absx = std::fmod(std::abs(x), L);
    absx = std::min(absx, L - absx);
    const auto& nodes = detail::gogolin_nodes();
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.u.size(); ++i) {
        const double k = 0.5 * gamma * nodes.one_plus_u2[i];
        acc += nodes.w[i] * detail::periodized_exp(absx, k, L);
    }
    return (M_PI * M_PI / 8.0) * gamma * acc;
}

struct DensityProfile {
    std::vector<double> x_grid;
    std::vector<double> values;   // inverse length
    double mass = 0.0;            // trapezoid integral over x_grid
    double mass_target = 1.0;     // expected mass (window weight)
    bool empty_window = false;    // window carried no spectral weight
    std::string meta;             // JSON parameter record for serialization
};

namespace detail {

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        m += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return m;
}

struct EnergyNode {
    double E, weight, gamma;
};

// adaptive panel refinement of int w(E) dE on [a, b], then GL21 nodes per panel
template <class W>
inline void build_energy_panels(const W& weight, std::vector<double> breakpoints,
                                double rel_tol, std::vector<std::pair<double, double>>& out) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    struct Panel { double a, b, val, err; };
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) continue;
        Panel p{breakpoints[i], breakpoints[i + 1], 0.0, 0.0};
        gl_pair(weight, p.a, p.b, p.val, p.err);
        panels.push_back(p);
    }
    for (int iter = 0; iter < 400; ++iter) {
        double tv = 0.0, te = 0.0;
        for (const auto& p : panels) { tv += std::abs(p.val); te += p.err; }
        if (te <= rel_tol * std::max(tv, 1e-300)) break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        Panel l{p.a, m, 0.0, 0.0}, r{m, p.b, 0.0, 0.0};
        gl_pair(weight, l.a, l.b, l.val, l.err);
        gl_pair(weight, r.a, r.b, r.val, r.err);
        panels[worst] = l;
        panels.push_back(r);
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.a < b.a; });
    out.clear();
    for (const auto& p : panels) out.emplace_back(p.a, p.b);
}

} // namespace detail

struct ProfileOptions {
    DConvention convention = DConvention::half_line;
    // simplified theory: free-particle P0(E) weights and the weak-disorder
    // exponent; diverges at x = 0
    bool simplified = false;
    FreeDistributionVariant free_variant = FreeDistributionVariant::consistent_limit;
    bool convolve_initial_spread = false;  // fold in the q-marginal of the Wigner function
    double panel_rel_tol = 1e-9;
    std::vector<double> extra_breakpoints;
};

namespace detail {

struct EnergyQuadrature {
    std::vector<EnergyNode> nodes;
    double mass = 0.0;
};

inline EnergyQuadrature energy_quadrature(const WavePacketSpec& wp, const DisorderModel& m,
                                          double E_lo, double E_hi, const ProfileOptions& opt) {
    wp.validate();
    m.validate();
    EnergyQuadrature q;
    const double a = wp.a;
    const double band = 1.0 / (a * a);
    if (opt.simplified) {
        // P0 ~ E^{-1/2} near zero and gamma_born ~ 1/E: integrate on log axis
        const double floor_E = std::max(E_lo, 1e-12 * band);
        if (!(E_hi > floor_E)) return q;
        auto weight = [&](double t) {
            const double E = std::exp(t);
            return free_energy_distribution(E, wp, opt.free_variant) * E;
        };
        std::vector<double> bp = {std::log(floor_E), std::log(E_hi)};
        for (double t = std::log(floor_E); t < std::log(E_hi); t += 2.0) bp.push_back(t);
        if (band > floor_E && band < E_hi) bp.push_back(std::log(band));
        std::vector<std::pair<double, double>> panels;
        build_energy_panels(weight, bp, opt.panel_rel_tol, panels);
        for (auto [ta, tb] : panels) {
            const double c = 0.5 * (ta + tb), h = 0.5 * (tb - ta);
            for (int i = 0; i < 21; ++i) {
                const double t = c + h * gl21_x[i];
                const double E = std::exp(t);
                detail::EnergyNode n;
                n.E = E;
                n.weight = h * gl21_w[i] * free_energy_distribution(E, wp, opt.free_variant) * E;
                n.gamma = gamma_born(E, m);
                q.nodes.push_back(n);
                q.mass += n.weight;
            }
        }
        return q;
    }
    const double edge = scba_support_edge(m, opt.convention);
    const double lo = std::max(E_lo, edge);
    const double hi = std::min(E_hi, std::max(50.0 / (a * a), edge + 1.0));
    if (!(hi > lo)) return q;
    auto weight = [&](double E) { return energy_distribution(E, wp, m, opt.convention); };
    std::vector<double> bp = {lo, hi};
    for (double b : {0.0, band, 4.0 * band, 0.5 * edge})
        if (b > lo && b < hi) bp.push_back(b);
    for (double b : opt.extra_breakpoints)
        if (b > lo && b < hi) bp.push_back(b);
    std::vector<std::pair<double, double>> panels;
    build_energy_panels(weight, bp, opt.panel_rel_tol, panels);
    for (auto [ea, eb] : panels) {
        const double c = 0.5 * (ea + eb), h = 0.5 * (eb - ea);
        for (int i = 0; i < 21; ++i) {
            detail::EnergyNode n;
            n.E = c + h * gl21_x[i];
            n.weight = h * gl21_w[i] * weight(n.E);
            n.gamma = gamma_model(n.E, m);
            q.nodes.push_back(n);
            q.mass += n.weight;
        }
    }
    return q;
}

// circular convolution with the normalized q-marginal of the Wigner function
inline void convolve_gaussian_periodic(std::vector<double>& v, double dx, double a) {
    const std::size_t n = v.size();
    const int half = std::min<std::size_t>(n / 2, (std::size_t)std::ceil(6.0 * a / dx));
    std::vector<double> kern(2 * half + 1);
    double norm = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double q = j * dx;
        kern[j + half] = std::exp(-q * q / (a * a));
        norm += kern[j + half];
    }
    for (auto& k : kern) k /= norm;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -half; j <= half; ++j) {
            long idx = (long(i) + j) % long(n);
            if (idx < 0) idx += long(n);
            acc += kern[j + half] * v[std::size_t(idx)];
        }
        out[i] = acc;
    }
    v = std::move(out);
}

inline DensityProfile integrate_profile(const std::vector<double>& x_grid,
                                        const WavePacketSpec& wp, const DisorderModel& m,
                                        double box_length, double E_lo, double E_hi,
                                        const ProfileOptions& opt, double mass_target) {
    if (!(box_length > 0.0)) throw std::invalid_argument("density profile: box_length must be positive");
    EnergyQuadrature q = energy_quadrature(wp, m, E_lo, E_hi, opt);
    DensityProfile prof;
    prof.x_grid = x_grid;
    prof.values.assign(x_grid.size(), 0.0);
    prof.mass_target = std::isnan(mass_target) ? q.mass : mass_target;
    if (q.nodes.empty()) {
        prof.empty_window = true;
        return prof;
    }
    const auto& nodes = detail::gogolin_nodes();
    const std::size_t nu = nodes.u.size();
    std::vector<double> kappa(nu);
    for (const auto& en : q.nodes) {
        if (!(en.gamma > 0.0)) continue;
        for (std::size_t i = 0; i < nu; ++i) kappa[i] = 0.5 * en.gamma * nodes.one_plus_u2[i];
        const double pref = (M_PI * M_PI / 8.0) * en.gamma * en.weight;
        for (std::size_t xi = 0; xi < x_grid.size(); ++xi) {
            double absx = std::fmod(std::abs(x_grid[xi]), box_length);
            absx = std::min(absx, box_length - absx);
            double acc = 0.0;
            for (std::size_t i = 0; i < nu; ++i)
                acc += nodes.w[i] * periodized_exp(absx, kappa[i], box_length);
            prof.values[xi] += pref * acc;
        }
    }
    if (opt.convolve_initial_spread && x_grid.size() > 2)
        convolve_gaussian_periodic(prof.values, x_grid[1] - x_grid[0], wp.a);
    prof.mass = trapezoid(x_grid, prof.values);
    return prof;
}

} // namespace detail

// Disorder-averaged asymptotic density of the wave packet on the periodic
// box: n(x) = int dE P(E) sum_j n_E(x + jL).
inline DensityProfile asymptotic_density(const std::vector<double>& x_grid,
                                         const WavePacketSpec& wp, const DisorderModel& m,
                                         double box_length,
                                         const ProfileOptions& opt = {}) {
    const double inf = std::numeric_limits<double>::infinity();
    DensityProfile p = detail::integrate_profile(x_grid, wp, m, box_length,
                                                 -inf, inf, opt, 1.0);
    if (opt.simplified)
        for (std::size_t i = 0; i < x_grid.size(); ++i)
            if (std::abs(x_grid[i]) < 1e-14) p.values[i] = inf;   // genuine divergence
    return p;
}

// Same restricted to eigenenergies inside (E_lo, E_hi].
inline DensityProfile windowed_density(const std::vector<double>& x_grid,
                                       const WavePacketSpec& wp, const DisorderModel& m,
                                       double box_length, std::pair<double, double> window,
                                       const ProfileOptions& opt = {}) {
    if (!(window.first < window.second))
        throw std::invalid_argument("windowed_density: window must be ordered");
    // NaN target: take the window's own spectral weight as the mass contract
    return detail::integrate_profile(x_grid, wp, m, box_length, window.first,
                                     window.second, opt,
                                     std::numeric_limits<double>::quiet_NaN());
}

// CSV serialization: one '#'-prefixed JSON metadata line, then x,n rows.
inline void write_profile_csv(const DensityProfile& p, std::ostream& os) {
    os << "# " << (p.meta.empty() ? "{}" : p.meta) << "\n";
    os << "x,n\n";
    char buf[80];
    for (std::size_t i = 0; i < p.x_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x_grid[i], p.values[i]);
        os << buf;
    }
}

} // namespace wploc
