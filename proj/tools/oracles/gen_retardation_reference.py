#!/usr/bin/env python3
"""Two-dot amplitudes from the delay equations, integrated exactly by the method of steps.

    b1' = -g b1 + i g e^{i theta} b2(t - tau)
    b2' = -g b2 + i g e^{i theta} b1(t - tau),   b1(0) = 1, b2(0) = 0, zero history

On each interval [k tau, (k+1) tau] sympy integrates the variation-of-constants formula in closed
form, then the result is evaluated at 30 digits.
"""
import sys

import sympy as sp

t, u = sp.symbols("t u", real=True)

CASES = [  # g, tau, theta
    (sp.Integer(1), sp.Rational(13, 10), sp.Rational(7, 10)),
    (sp.Rational(1, 2), sp.Integer(2), sp.pi / 2),
    (sp.Integer(1), sp.Rational(1, 2), sp.Rational(35, 10)),
]


def pieces(g, tau, theta, intervals):
    hop = sp.I * g * sp.exp(sp.I * theta)
    b1 = [sp.exp(-g * t)]
    b2 = [sp.Integer(0)]
    for k in range(1, intervals):
        t0 = k * tau
        s1 = b2[k - 1].subs(t, u - tau)
        s2 = b1[k - 1].subs(t, u - tau)
        n1 = sp.exp(-g * (t - t0)) * b1[k - 1].subs(t, t0) + sp.integrate(
            sp.expand(sp.exp(-g * (t - u)) * hop * s1), (u, t0, t))
        n2 = sp.exp(-g * (t - t0)) * b2[k - 1].subs(t, t0) + sp.integrate(
            sp.expand(sp.exp(-g * (t - u)) * hop * s2), (u, t0, t))
        b1.append(sp.expand(n1))
        b2.append(sp.expand(n2))
    return b1, b2


def main():
    rows = []
    for g, tau, theta in CASES:
        intervals = 6
        b1, b2 = pieces(g, tau, theta, intervals)
        for j in range(1, 4 * intervals):
            tv = tau * sp.Rational(j, 4) + sp.Rational(1, 7) * tau / 4
            k = int(sp.floor(tv / tau))
            if k >= intervals:
                continue
            v1 = sp.N(b1[k].subs(t, tv), 30)
            v2 = sp.N(b2[k].subs(t, tv), 30)
            f = lambda x: sp.N(x, 20)
            rows.append(
                f"{{{f(g)}, {f(tau)}, {f(theta)}, {f(tv)}, {{{f(sp.re(v1))}, {f(sp.im(v1))}}}, "
                f"{{{f(sp.re(v2))}, {f(sp.im(v2))}}}}},")
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/retardation_reference.inc"
    with open(out, "w") as fh:
        fh.write("// g, tau, theta, t, b1, b2 (method of steps, sympy)\n")
        fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
