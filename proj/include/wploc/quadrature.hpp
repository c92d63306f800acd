#pragma once

// Adaptive Gauss-Legendre quadrature (nested 10/21 point pair), half-line
// transforms and a principal-value integrator with symmetric excision.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wploc {

namespace detail {

inline constexpr double gl10_x[10] = {
    -9.73906528517171743e-01, -8.65063366688984536e-01, -6.79409568299024436e-01,
    -4.33395394129247213e-01, -1.48874338981631216e-01, 1.48874338981631216e-01,
    4.33395394129247213e-01, 6.79409568299024436e-01, 8.65063366688984536e-01,
    9.73906528517171743e-01};
inline constexpr double gl10_w[10] = {
    6.66713443086880686e-02, 1.49451349150580365e-01, 2.19086362515982014e-01,
    2.69266719309996516e-01, 2.95524224714752981e-01, 2.95524224714752981e-01,
    2.69266719309996516e-01, 2.19086362515982014e-01, 1.49451349150580365e-01,
    6.66713443086880686e-02};
inline constexpr double gl21_x[21] = {
    -9.93752170620389452e-01, -9.67226838566306313e-01, -9.20099334150400794e-01,
    -8.53363364583317296e-01, -7.68439963475677890e-01, -6.67138804197412338e-01,
    -5.51618835887219827e-01, -4.24342120207438778e-01, -2.88021316802401117e-01,
    -1.45561854160895093e-01, 0.00000000000000000e+00, 1.45561854160895093e-01,
    2.88021316802401117e-01, 4.24342120207438778e-01, 5.51618835887219827e-01,
    6.67138804197412338e-01, 7.68439963475677890e-01, 8.53363364583317296e-01,
    9.20099334150400794e-01, 9.67226838566306313e-01, 9.93752170620389452e-01};
inline constexpr double gl21_w[21] = {
    1.60172282577741368e-02, 3.69537897708529170e-02, 5.71344254268571564e-02,
    7.61001136283793456e-02, 9.34444234560338205e-02, 1.08797299167148309e-01,
    1.21831416053728422e-01, 1.32268938633337385e-01, 1.39887394791073122e-01,
    1.44524403989970074e-01, 1.46081133649690470e-01, 1.44524403989970074e-01,
    1.39887394791073122e-01, 1.32268938633337385e-01, 1.21831416053728422e-01,
    1.08797299167148309e-01, 9.34444234560338205e-02, 7.61001136283793456e-02,
    5.71344254268571564e-02, 3.69537897708529170e-02, 1.60172282577741368e-02};

template <class F>
inline void gl_pair(const F& f, double a, double b, double& i21, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s10 = 0.0, s21 = 0.0;
    for (int i = 0; i < 10; ++i) s10 += gl10_w[i] * f(c + h * gl10_x[i]);
    for (int i = 0; i < 21; ++i) s21 += gl21_w[i] * f(c + h * gl21_x[i]);
    i21 = h * s21;
    err = std::abs(h * (s21 - s10));
}

} // namespace detail

struct QuadResult {
    double value = 0.0;
    double error = 0.0;      // error estimate
    std::size_t n_panels = 0;
    bool converged = true;
};

// Adaptive bisection on [a, b]. Stops when the summed panel error estimate
// drops below max(abs_tol, rel_tol * |integral|).
template <class F>
inline QuadResult integrate(const F& f, double a, double b,
                            double abs_tol = 1e-12, double rel_tol = 1e-10,
                            int max_panels = 4000) {
    struct Panel { double a, b, val, err; };
    std::vector<Panel> panels;
    double v, e;
    detail::gl_pair(f, a, b, v, e);
    panels.push_back({a, b, v, e});
    auto totals = [&panels] {
        double tv = 0.0, te = 0.0;
        for (const auto& p : panels) { tv += p.val; te += p.err; }
        return std::pair<double, double>(tv, te);
    };
    while ((int)panels.size() < max_panels) {
        auto [tv, te] = totals();
        if (te <= std::max(abs_tol, rel_tol * std::abs(tv))) break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        Panel l, r;
        l.a = p.a; l.b = m; r.a = m; r.b = p.b;
        detail::gl_pair(f, l.a, l.b, l.val, l.err);
        detail::gl_pair(f, r.a, r.b, r.val, r.err);
        panels[worst] = l;
        panels.push_back(r);
    }
    auto [tv, te] = totals();
    QuadResult res;
    res.value = tv;
    res.error = te;
    res.n_panels = panels.size();
    res.converged = te <= std::max(abs_tol, rel_tol * std::abs(tv)) * 4.0;
    return res;
}

// Integration over [a, b] split at interior breakpoints.
template <class F>
inline QuadResult integrate_split(const F& f, std::vector<double> pts,
                                  double abs_tol = 1e-12, double rel_tol = 1e-10) {
    QuadResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        QuadResult r = integrate(f, pts[i], pts[i + 1], abs_tol / pts.size(), rel_tol);
        total.value += r.value;
        total.error += r.error;
        total.n_panels += r.n_panels;
        total.converged = total.converged && r.converged;
    }
    return total;
}

// Semi-infinite integral via x = a + t/(1-t).
template <class F>
inline QuadResult integrate_half_line(const F& f, double a,
                                      double abs_tol = 1e-12, double rel_tol = 1e-10) {
    auto g = [&f, a](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        return f(x) / (om * om);
    };
    return integrate(g, 0.0, 1.0 - 1e-12, abs_tol, rel_tol);
}

struct PvResult {
    double value = 0.0;
    double error = 0.0;      // quadrature + extrapolation estimate
};

// Principal value of int_a^b f(x)/(x - pole) dx. The window |x - pole| < eps
// is excised symmetrically, which cancels the f(pole)/t singularity exactly;
// the excised remainder is restored as int_0^eps [f(p+t) - f(p-t)]/t dt,
// integrable even when f has a kink at the pole. Two widths give a
// consistency-based error estimate.
template <class F>
inline PvResult pv_integral(const F& f, double pole, double a, double b,
                            double eps = 1e-3, double abs_tol = 1e-11) {
    if (!(a < pole && pole < b)) throw std::invalid_argument("pv_integral: pole outside interval");
    auto g = [&](double x) { return f(x) / (x - pole); };
    auto paired = [&](double t) {
        if (t < 1e-300) return 0.0;
        return (f(pole + t) - f(pole - t)) / t;
    };
    auto eval = [&](double e) {
        QuadResult l = integrate(g, a, pole - e, abs_tol / 4, 1e-11);
        QuadResult r = integrate(g, pole + e, b, abs_tol / 4, 1e-11);
        QuadResult c = integrate(paired, 0.0, e, abs_tol / 4, 1e-11, 6000);
        return std::pair<double, double>(l.value + r.value + c.value,
                                         l.error + r.error + c.error);
    };
    auto [v1, ee1] = eval(eps);
    auto [v2, ee2] = eval(eps / 4.0);
    PvResult res;
    res.value = v2;
    res.error = std::abs(v2 - v1) + ee2;
    return res;
}

} // namespace wploc
