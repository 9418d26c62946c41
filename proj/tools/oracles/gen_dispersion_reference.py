#!/usr/bin/env python3
"""Bound-mode roots of the cylinder dispersion relation, written with modified Bessel functions.

On the bound sheet both transverse wavevectors are imaginary, so the relation becomes a real
equation in Omega:
    (a - b) Omega^2 (eps_I a - eps_O b) - n^2 K^2 (1/y_I^2 - 1/y_O^2)^2 = 0
    a = -I_n'(y_I)/(y_I I_n(y_I)),  b = -K_n'(y_O)/(y_O K_n(y_O)),  y = R sqrt(K^2 - eps Omega^2)
with eps_I = eps_inf (1 - 1/Omega^2). Every sign change on a fine Omega scan below both the light
line and Omega = 1 is refined at 30 digits.
"""
import sys

import mpmath as mp

mp.mp.dps = 30
EPS_INF, EPS_O, R = mp.mpf("9.6"), mp.mpf("5.3"), mp.mpf("0.1")


def residual(n, K, W):
    eI = EPS_INF * (1 - 1 / W**2)
    yI = R * mp.sqrt(K**2 - eI * W**2)
    yO = R * mp.sqrt(K**2 - EPS_O * W**2)
    a = -mp.besseli(n, yI, derivative=1) / (yI * mp.besseli(n, yI))
    kp = -(mp.besselk(n - 1, yO) + mp.besselk(n + 1, yO)) / 2  # besselk has no derivative option
    b = -kp / (yO * mp.besselk(n, yO))
    return (a - b) * W**2 * (eI * a - EPS_O * b) - n**2 * K**2 * (1 / yI**2 - 1 / yO**2) ** 2


def roots(n, K):
    lo = mp.mpf("1e-3")
    hi = min(mp.mpf(1), K / mp.sqrt(EPS_O)) * (1 - mp.mpf("1e-7"))
    out = []
    if lo >= hi:
        return out
    N = 600
    xs = [lo + (hi - lo) * i / N for i in range(N + 1)]
    fs = [residual(n, K, x) for x in xs]
    for i in range(N):
        if fs[i] == 0 or (fs[i] > 0) != (fs[i + 1] > 0):
            r = mp.findroot(lambda w: residual(n, K, w), (xs[i], xs[i + 1]), solver="anderson")
            # a pole of I'/I or K'/K also flips the sign; keep true zeros only
            if abs(residual(n, K, r)) < mp.mpf("1e-20"):
                out.append(r)
    return out


def main():
    rows = []
    for n in (0, 1, 2):
        for K in ("2.5", "5", "10", "15", "20", "30"):
            for r in roots(n, mp.mpf(K)):
                rows.append(f"{{{n}, {K}, {mp.nstr(r, 20)}}},")
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/dispersion_reference.inc"
    with open(out, "w") as f:
        f.write("// n, K, Omega of bound roots (modified-Bessel form, mpmath 30 digits)\n")
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
