#pragma once

// Real and complex special functions used by the analytic formulas:
// Airy pairs, the log-derivative of the Airy modulus M = sqrt(Ai^2+Bi^2),
// the Faddeeva function w(z) on the upper half plane, complex erfc, and
// the real imaginary error function erfi.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace wploc {

using cplx = std::complex<double>;

// Principal square root with the branch fixed on the negative real axis:
// a negative real input maps to +i sqrt(|x|) (upper side of the cut),
// regardless of the sign bit of the imaginary part.
inline cplx principal_sqrt(cplx z) {
    if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
    return std::sqrt(z);
}

struct AiryPair {
    double ai, bi, dai, dbi;
};

namespace detail {

inline constexpr double kAiryZero  = 0.35502805388781723926;   // Ai(0)
inline constexpr double kDAiryZero = 0.25881940379280679840;   // -Ai'(0)
inline constexpr double kSqrt3     = 1.7320508075688772935;
inline constexpr double kInvSqrtPi = 0.56418958354775628695;

// Maclaurin sums of the two standard solutions f, g of w'' = y w and their
// derivatives. Converges for any y; useful in double precision for |y| <~ 4.5
// before cancellation in Ai erodes accuracy.
inline void airy_maclaurin(double y, double& f, double& g, double& df, double& dg) {
    f = 1.0; g = y; df = 0.0; dg = 1.0;
    if (y == 0.0) { g = 0.0; return; }
    const double y3 = y * y * y;
    double tf = 1.0, tg = y;
    for (int k = 1; k < 200; ++k) {
        tf *= y3 / ((3.0 * k) * (3.0 * k - 1.0));
        tg *= y3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        df += tf * (3.0 * k) / y;       // d/dy y^{3k} = 3k y^{3k-1}
        dg += tg * (3.0 * k + 1.0) / y;
        if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * std::abs(g))
            break;
    }
}

inline AiryPair airy_from_fg(double f, double g, double df, double dg) {
    AiryPair r;
    r.ai  = kAiryZero * f  - kDAiryZero * g;
    r.dai = kAiryZero * df - kDAiryZero * dg;
    r.bi  = kSqrt3 * (kAiryZero * f  + kDAiryZero * g);
    r.dbi = kSqrt3 * (kAiryZero * df + kDAiryZero * dg);
    return r;
}

// u_k, v_k coefficients of the large-|y| expansions (DLMF 9.7.2).
inline void airy_uv(int k, double& u, double& v) {
    static thread_local double ucache[48] = {1.0};
    static thread_local int have = 1;
    while (have <= k) {
        const double kk = have;
        ucache[have] = ucache[have - 1] *
            (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0) /
            (216.0 * kk * (2.0 * kk - 1.0));
        ++have;
    }
    u = ucache[k];
    v = (6.0 * k + 1.0) / (1.0 - 6.0 * k) * u;
    if (k == 0) v = 1.0;
}

// Oscillatory-side expansion, y = -t, t >= ~7 (DLMF 9.7.9-9.7.12).
inline AiryPair airy_asymptotic_neg(double t) {
    const double zeta = (2.0 / 3.0) * t * std::sqrt(t);
    const double t14 = std::pow(t, 0.25);
    double pe = 0.0, po = 0.0, qe = 0.0, qo = 0.0;   // u-even, u-odd, v-even, v-odd
    double zp = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 0; k < 40; ++k) {
        double u, v;
        airy_uv(k, u, v);
        const double term = u / zp;
        if (std::abs(term) > prev) break;            // asymptotic tail turned
        prev = std::abs(term);
        const double sgn = (k / 2 % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) { pe += sgn * u / zp; qe += sgn * v / zp; }
        else            { po += sgn * u / zp; qo += sgn * v / zp; }
        zp *= zeta;
        if (prev < 1e-18) break;
    }
    const double w = zeta - 0.25 * M_PI;
    const double c = std::cos(w), s = std::sin(w);
    AiryPair r;
    const double amp = kInvSqrtPi / t14;
    r.ai  = amp * (c * pe + s * po);
    r.bi  = amp * (-s * pe + c * po);
    const double damp = kInvSqrtPi * t14;
    r.dai = damp * (s * qe - c * qo);
    r.dbi = damp * (c * qe + s * qo);
    return r;
}

// Decaying/growing-side expansion, y >= ~9.
inline AiryPair airy_asymptotic_pos(double y) {
    const double zeta = (2.0 / 3.0) * y * std::sqrt(y);
    const double y14 = std::pow(y, 0.25);
    double sa = 0.0, sb = 0.0, da = 0.0, db = 0.0;
    double zp = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 0; k < 40; ++k) {
        double u, v;
        airy_uv(k, u, v);
        const double term = u / zp;
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        sa += sgn * u / zp;
        da += sgn * v / zp;
        sb += u / zp;
        db += v / zp;
        zp *= zeta;
        if (prev < 1e-18) break;
    }
    const double em = std::exp(-zeta);
    const double ep = std::exp(zeta);              // caller guards overflow
    AiryPair r;
    r.ai  = 0.5 * kInvSqrtPi * em / y14 * sa;
    r.dai = -0.5 * kInvSqrtPi * em * y14 * da;
    r.bi  = kInvSqrtPi * ep / y14 * sb;
    r.dbi = kInvSqrtPi * ep * y14 * db;
    return r;
}

// Taylor propagation of one solution of w'' = y w from y0 to y0+t:
// a_{n+2} = (y0 a_n + a_{n-1}) / ((n+1)(n+2)) with a_{-1} = 0.
inline void airy_taylor_step(double y0, double t, double& w, double& dw) {
    constexpr int N = 56;
    double a[N];
    a[0] = w;
    a[1] = dw;
    for (int n = 0; n + 2 < N; ++n)
        a[n + 2] = (y0 * a[n] + (n >= 1 ? a[n - 1] : 0.0)) / ((n + 1.0) * (n + 2.0));
    double sum = 0.0, dsum = 0.0;                  // Horner, highest order first
    for (int n = N - 1; n >= 1; --n) {
        sum = sum * t + a[n];
        dsum = dsum * t + n * a[n];
    }
    w = sum * t + a[0];
    dw = dsum;
}

inline AiryPair airy_by_stepping(double from, double target, AiryPair seed) {
    const int nstep = std::max(1, (int)std::ceil(std::abs(target - from) / 1.15));
    const double dt = (target - from) / nstep;
    double y = from;
    for (int i = 0; i < nstep; ++i) {
        double a = seed.ai, da = seed.dai;
        double b = seed.bi, db = seed.dbi;
        airy_taylor_step(y, dt, a, da);
        airy_taylor_step(y, dt, b, db);
        seed = {a, b, da, db};
        y += dt;
    }
    return seed;
}

} // namespace detail

// Airy functions of the first and second kind with derivatives.
// Throws std::overflow_error once Bi leaves the double range (y >~ 105).
inline AiryPair airy_pair(double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("airy_pair: non-finite argument");
    if (y > 104.0) throw std::overflow_error("airy_pair: Bi overflows double range");
    if (std::abs(y) <= 4.2) {
        double f, g, df, dg;
        detail::airy_maclaurin(y, f, g, df, dg);
        return detail::airy_from_fg(f, g, df, dg);
    }
    if (y < 0.0) {
        if (y <= -7.5) return detail::airy_asymptotic_neg(-y);
        double f, g, df, dg;
        detail::airy_maclaurin(-4.2, f, g, df, dg);
        return detail::airy_by_stepping(-4.2, y, detail::airy_from_fg(f, g, df, dg));
    }
    // positive side: Bi by Maclaurin up to 9 (monotone terms), Ai by downward
    // stepping from the asymptotic anchor at 9
    if (y >= 9.0) return detail::airy_asymptotic_pos(y);
    double f, g, df, dg;
    detail::airy_maclaurin(y, f, g, df, dg);
    AiryPair mac = detail::airy_from_fg(f, g, df, dg);
    AiryPair anchor = detail::airy_asymptotic_pos(9.0);
    AiryPair stepped = detail::airy_by_stepping(9.0, y, anchor);
    return {stepped.ai, mac.bi, stepped.dai, mac.dbi};
}

// M'(y)/M(y) with M = sqrt(Ai^2 + Bi^2). Large-|y| tails use series that
// cancel the overflow analytically.
inline double m_log_derivative(double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("m_log_derivative: non-finite argument");
    if (y <= -12.0) {
        // smooth expansion M^2 ~ (pi sqrt(t))^{-1} sum_k a_k t^{-3k} from the
        // product ODE w''' = 4yw' + 2w
        const double t = -y;
        const double it3 = 1.0 / (t * t * t);
        constexpr double a[5] = {1.0, -5.0 / 32.0, 1155.0 / 2048.0,
                                 -3828825.0 / 589824.0, 35135126025.0 / 226492416.0};
        double S = 0.0, dS = 0.0, p = 1.0;
        for (int k = 0; k < 5; ++k) {
            S += a[k] * p;
            dS += 3.0 * k * a[k] * p / t;
            p *= it3;
        }
        return 0.25 / t + 0.5 * dS / S;
    }
    if (y >= 25.0) {
        // M ~ Bi: ratio of the asymptotic series, no exponentials involved
        const double zeta = (2.0 / 3.0) * y * std::sqrt(y);
        double su = 0.0, sv = 0.0, zp = 1.0, prev = std::numeric_limits<double>::max();
        for (int k = 0; k < 40; ++k) {
            double u, v;
            detail::airy_uv(k, u, v);
            if (std::abs(u / zp) > prev) break;
            prev = std::abs(u / zp);
            su += u / zp;
            sv += v / zp;
            zp *= zeta;
            if (prev < 1e-18) break;
        }
        return std::sqrt(y) * sv / su;
    }
    const AiryPair p = airy_pair(y);
    return (p.ai * p.dai + p.bi * p.dbi) / (p.ai * p.ai + p.bi * p.bi);
}

namespace detail {

// Laplace continued fraction for w(z), reliable for |z| >= ~7 in the closed
// upper half plane.
inline cplx faddeeva_cf(cplx z) {
    cplx acc(0.0, 0.0);
    for (int n = 60; n >= 1; --n) acc = (0.5 * n) / (z - acc);
    return cplx(0.0, kInvSqrtPi) / (z - acc);
}

// erfc(xi + i nu) for xi >= 0 via the trigonometric series of the Poisson-
// summed error function (A&S 7.1.29 rearranged around erfc to avoid the
// 1 - erf cancellation).
inline cplx erfc_trig_series(double xi, double nu) {
    const double e = std::exp(-xi * xi);
    double re = std::erfc(xi), im = 0.0;
    if (xi != 0.0) {
        const double s = std::sin(xi * nu);
        re -= e / (2.0 * M_PI * xi) * 2.0 * s * s;
        im -= e / (2.0 * M_PI * xi) * std::sin(2.0 * xi * nu);
    } else {
        im -= nu / M_PI;
    }
    const int nmax = 2 * (int)std::ceil(std::abs(nu)) + 18;
    const double c2 = std::cos(2.0 * xi * nu), s2 = std::sin(2.0 * xi * nu);
    double sre = 0.0, sim = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        const double en = std::exp(-0.25 * n * n) / (n * n + 4.0 * xi * xi);
        const double ch = std::cosh(n * nu), sh = std::sinh(n * nu);
        sre += en * (2.0 * xi - 2.0 * xi * ch * c2 + n * sh * s2);
        sim += en * (2.0 * xi * ch * s2 + n * sh * c2);
    }
    re -= (2.0 / M_PI) * e * sre;
    im -= (2.0 / M_PI) * e * sim;
    return {re, im};
}

} // namespace detail

// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for Im z >= 0.
inline cplx faddeeva_w(cplx z) {
    if (std::norm(z) >= 49.0) return detail::faddeeva_cf(z);
    // w = e^{-z^2} erfc(zeta), zeta = -iz has Re zeta = Im z >= 0
    const double xi = z.imag(), nu = -z.real();
    const cplx erfc_v = detail::erfc_trig_series(xi, nu);
    const cplx em = std::exp(-z * z);
    return em * erfc_v;
}

// Scaled complementary error function erfcx(x) = e^{x^2} erfc(x), x >= 0.
inline double erfcx(double x) {
    if (x < 0.0) throw std::invalid_argument("erfcx: negative argument");
    if (x >= 7.0) return detail::faddeeva_cf(cplx(0.0, x)).real();
    return std::erfc(x) * std::exp(x * x);
}

// erfc of a complex argument. Accurate to ~1e-13 relative in the strip
// |Im z| <= 10, |z| <= 30; exact std::erfc on the real axis.
inline cplx erfc_complex(cplx z) {
    if (z.imag() == 0.0) return {std::erfc(z.real()), 0.0};
    if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
    if (std::norm(z) >= 49.0) {
        // erfc(z) = e^{-z^2} w(iz), Im(iz) = Re z >= 0
        return std::exp(-z * z) * detail::faddeeva_cf(cplx(-z.imag(), z.real()));
    }
    return detail::erfc_trig_series(z.real(), z.imag());
}

// erfi(x) = -i erf(ix), real for real x. The Maclaurin series has positive
// terms only, so it is cancellation-free for every x below overflow.
inline double erfi_real(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("erfi_real: non-finite argument");
    const double ax = std::abs(x);
    if (ax * ax > 705.0) throw std::overflow_error("erfi_real: result exceeds double range");
    double term = ax, sum = ax;
    const double x2 = ax * ax;
    for (int k = 1; k < 1200; ++k) {
        term *= x2 / k;
        const double add = term / (2.0 * k + 1.0);
        sum += add;
        if (add < 1e-18 * sum) break;
    }
    const double v = 2.0 * detail::kInvSqrtPi * sum;
    return x < 0.0 ? -v : v;
}

} // namespace wploc
