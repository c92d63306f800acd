#!/usr/bin/env python3
"""Regenerate tests/unit/reference_values.hpp.

High-precision reference values (mpmath, 40 significant digits) for the
special-function and self-energy tests. Run from the repository root:

    python3 tests/tools/gen_reference.py > tests/unit/reference_values.hpp
"""
import mpmath as mp

mp.mp.dps = 40

def fmt(x):
    x = mp.mpf(x)
    if x != 0 and abs(x) < mp.mpf(10) ** -307:   # below double range
        x = mp.mpf(0)
    return mp.nstr(x, 17, strip_zeros=False)

def cfmt(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (fmt(z.real), fmt(z.imag))

print("// Generated by tests/tools/gen_reference.py (mpmath, 40-digit).")
print("// Do not edit by hand.")
print("#pragma once")
print("#include <complex>")
print()
print("namespace refv {")
print()

# ---- Airy pairs ----
ys = [-20.0, -15.5, -12.25, -10.0, -8.5, -7.6, -7.5, -7.4, -6.786, -6.3,
      -5.55, -5.0, -4.4343, -4.25, -4.2, -4.15, -3.3, -2.33811, -1.7, -1.0,
      -0.5, -0.25, 0.0, 0.5, 1.0, 2.1, 3.3, 4.15, 4.2, 4.25, 4.7, 5.0,
      6.5, 8.0, 8.95, 9.0, 9.5, 12.0, 20.0, 50.0, 100.0]
print("struct AiryRef { double y, ai, bi, dai, dbi; };")
print("inline constexpr AiryRef airy_table[] = {")
for y in ys:
    ai  = mp.airyai(y);  bi  = mp.airybi(y)
    dai = mp.airyai(y, 1); dbi = mp.airybi(y, 1)
    print("    {%s, %s, %s, %s, %s}," % (fmt(y), fmt(ai), fmt(bi), fmt(dai), fmt(dbi)))
print("};")
print()

# ---- M'(y)/M(y) with M = sqrt(Ai^2+Bi^2) ----
ys2 = [-2000.0, -500.0, -50.0, -20.0, -12.05, -12.0, -11.95, -7.5, -5.0,
       -4.4343, -2.0, -1.0, -0.4176, 0.0, 0.5277, 1.0, 2.5, 4.01, 5.0,
       8.0, 20.0, 24.9, 25.0, 25.1, 40.0, 200.0, 2000.0]
print("struct MlogRef { double y, mlogd; };")
print("inline constexpr MlogRef mlog_table[] = {")
for y in ys2:
    ai  = mp.airyai(y);  bi  = mp.airybi(y)
    dai = mp.airyai(y, 1); dbi = mp.airybi(y, 1)
    v = (ai*dai + bi*dbi) / (ai*ai + bi*bi)
    print("    {%s, %s}," % (fmt(y), fmt(v)))
print("};")
print()

# ---- Faddeeva w(z), upper half plane ----
def wofz(z):
    z = mp.mpc(z)
    return mp.exp(-z*z) * mp.erfc(-1j*z)

zs = [0.0+0.0j, 1e-8+0.0j, 0.3+0.0j, 1.0+0.0j, 3.0+0.0j, 5.5+0.0j, 6.9+0.0j,
      7.1+0.0j, 10.0+0.0j, 25.0+0.0j, 0.0+0.5j, 0.0+4.0j, 0.0+12.0j,
      0.5+0.5j, 2.0+1e-6j, 4.0+1e-3j, 6.0+2.0j, 6.9999+1e-9j, 5.0+4.8j,
      -3.0+0.2j, -6.5+1.5j, 9.0+0.1j, 14.0+1e-7j, 20.0+5.0j, 1.2+6.8j,
      0.089+1e-6j, 3.9+0.9j]
print("struct WRef { std::complex<double> z, w; };")
print("inline const WRef w_table[] = {")
for z in zs:
    print("    {%s, %s}," % (cfmt(z), cfmt(wofz(z))))
print("};")
print()

# ---- erfc(z), complex ----
zs2 = [0.0+0.0j, 1.0+0.0j, -1.0+0.0j, 2.5+3.0j, -2.5-3.0j, 0.3-7.0j,
       12.0+9.5j, -12.0+9.5j, 5.0+0.0j, 0.0+3.0j, 16.0-9.0j, 1e-3+1e-3j]
print("struct ErfcRef { std::complex<double> z, v; };")
print("inline const ErfcRef erfc_table[] = {")
for z in zs2:
    print("    {%s, %s}," % (cfmt(z), cfmt(mp.erfc(mp.mpc(z)))))
print("};")
print()

# ---- erfi(x), real ----
xs = [1e-6, 0.1, 0.5, 1.0, 2.0, 3.7, 4.5, 6.0, 10.0, 16.0, 25.0]
print("struct ErfiRef { double x, v; };")
print("inline constexpr ErfiRef erfi_table[] = {")
for x in xs:
    print("    {%s, %s}," % (fmt(x), fmt(mp.erfi(x))))
print("};")
print()

# ---- white-noise Lyapunov exponent and cumulative DOS ----
# gamma(E; D) = (D/4)^(1/3) * (Ai Ai' + Bi Bi')/(Ai^2+Bi^2) at y = -E (16/D^2)^(1/3)
print("struct GammaWhiteRef { double E, D, gamma, N; };")
print("inline constexpr GammaWhiteRef gamma_white_table[] = {")
for (E, D) in [(0.0, 1.0), (1.0, 1.0), (-1.0, 1.0), (0.11905507889761495, 1.0),
               (39.685026299204984, 1.0), (-39.685026299204984, 1.0),
               (0.5, 0.0047913423557853106), (0.05, 0.0047913423557853106),
               (2.0, 2e-4), (-0.05, 0.0052953), (0.0, 0.0052953)]:
    E_ = mp.mpf(E); D_ = mp.mpf(D)
    y = -E_ * (16/D_**2)**mp.mpf(1)/3 if False else -E_ * mp.power(16/(D_*D_), mp.mpf(1)/3)
    ai  = mp.airyai(y);  bi  = mp.airybi(y)
    dai = mp.airyai(y, 1); dbi = mp.airybi(y, 1)
    g = mp.power(D_/4, mp.mpf(1)/3) * (ai*dai + bi*dbi)/(ai*ai + bi*bi)
    N = mp.power(D_/4, mp.mpf(1)/3) / (mp.pi**2 * (ai*ai + bi*bi))
    print("    {%s, %s, %s, %s}," % (fmt(E_), fmt(D_), fmt(g), fmt(N)))
print("};")
print()

# ---- d(E) for the Gaussian correlation, both prefactor conventions ----
def d_of_E(E, V0, sc, pref):
    E = mp.mpc(E)
    s = mp.sqrt(2*E)*sc
    return pref*sc*V0**2*(1 + mp.exp(-2*E*sc*sc)*(1 + 1j*mp.erfi(s)))

print("struct DRef { double E, v0; std::complex<double> d_halfline, d_printed; };")
print("inline const DRef d_table[] = {")
for (E, V0) in [(-2.0, 0.0325), (-0.1, 0.0325), (0.0, 0.0325), (0.5, 0.0325),
                (3.0, 0.0325), (0.5, 0.0165), (-0.02, 0.0165)]:
    dh = d_of_E(E, mp.mpf(V0), mp.mpf(1), mp.sqrt(mp.pi/8))
    dp = d_of_E(E, mp.mpf(V0), mp.mpf(1), mp.pi/4)
    print("    {%s, %s, %s, %s}," % (fmt(E), fmt(V0), cfmt(dh), cfmt(dp)))
print("};")
print()

# ---- SCBA self-energy: root of S^3 - E S^2 - d^2 with the retarded branch ----
def scba(E, V0, pref):
    d = d_of_E(E, mp.mpf(V0), mp.mpf(1), pref)
    rts = mp.polyroots([mp.mpf(1), -mp.mpf(E), mp.mpf(0), -(d*d)], maxsteps=200, extraprec=80)
    ok = []
    for S in rts:
        z = mp.sqrt(mp.mpc(E) - S)
        if abs(S - d/(1j*z)) < mp.mpf(10)**-20 * max(abs(S), abs(d)**mp.mpf(2)/3 + mp.mpf(10)**-30):
            ok.append(S)
    neg = [S for S in ok if S.imag < -mp.mpf(10)**-25]
    if neg:
        return neg[0]
    return max(ok, key=lambda S: S.real)

print("struct ScbaRef { double E, v0; std::complex<double> sigma_halfline, sigma_printed; };")
print("inline const ScbaRef scba_table[] = {")
for (E, V0) in [(-0.1, 0.0325), (-0.03, 0.0325), (0.0, 0.0325), (0.25, 0.0325),
                (0.5, 0.0325), (2.0, 0.0325), (5.0, 0.0325), (0.0, 0.0165),
                (0.5, 0.0165), (-0.012, 0.0165)]:
    sh = scba(E, V0, mp.sqrt(mp.pi/8))
    sp = scba(E, V0, mp.pi/4)
    print("    {%s, %s, %s, %s}," % (fmt(E), fmt(V0), cfmt(sh), cfmt(sp)))
print("};")
print()

# ---- P(E) for a = sqrt(2), V0 = 0.0325 (half-line d convention) ----
def PE(E, a, V0):
    S = scba(E, V0, mp.sqrt(mp.pi/8))
    z = mp.sqrt(mp.mpc(E) - S)
    if z.imag < 0: z = -z
    if z.imag <= mp.mpf(10)**-30: return mp.mpf(0)
    return (a/mp.sqrt(mp.pi)) * (wofz(a*z)/z).real

print("struct PERef { double E, P; };")
print("inline constexpr PERef pe_table[] = {")
a = mp.sqrt(2)
for E in [-0.05, -0.0215, 0.005, 0.02, 0.05, 0.3, 1.0, 3.0]:
    print("    {%s, %s}," % (fmt(E), fmt(PE(E, a, 0.0325))))
print("};")
print()
print("} // namespace refv")
