"""Closed-form band-edge amplitudes b_e(t) for the unit and acceptance tests.

With z = i*delta + s and u = sqrt(s) the transform 1/(z + gamma/2 + a/sqrt(z - i*delta)) becomes
u/(u^3 + c u + a), c = i*delta + gamma/2.  Partial fractions over the roots u_j of the cubic and
L^{-1}[1/(sqrt(s) - u)] = 1/sqrt(pi t) + u exp(u^2 t) erfc(-u sqrt(t)) give

    b_e(t) = exp(i delta t) * sum_j A_j u_j exp(u_j^2 t) erfc(-u_j sqrt(t)),  A_j = u_j / (3 u_j^2 + c).
"""
import sys

import mpmath as mp

mp.mp.dps = 50

def amplitude(t, delta, gamma, C, kind):
    phase = mp.expj(-mp.pi / 4) if kind == "minimum" else mp.expj(mp.pi / 4)
    a = phase * C
    c = 1j * mp.mpf(delta) + mp.mpf(gamma) / 2
    roots = mp.polyroots([1, 0, c, a], maxsteps=200, extraprec=100)
    total = mp.mpc(0)
    for u in roots:
        A = u / (3 * u * u + c)
        total += A * u * mp.exp(u * u * t) * mp.erfc(-u * mp.sqrt(t))
    return mp.expj(mp.mpf(delta) * t) * total

specs = [
    # delta, gamma, C, kind
    (0.2, 0.1, 1.0, "minimum"),
    (0.4, 0.1, 1.0, "minimum"),
    (0.8, 0.1, 1.0, "minimum"),
    (0.0, 0.0, 1.0, "minimum"),
    (-0.3, 0.05, 0.7, "maximum"),
]
times = [0.5, 1.0, 2.0, 5.0, 8.0, 9.0, 10.0]

out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/decay_reference.inc"
with open(out, "w") as f:
    f.write("// delta, gamma, C, is_minimum, t, b_e(t) (closed form, mpmath 50 digits)\n")
    for d, g, C, kind in specs:
        for t in times:
            b = amplitude(mp.mpf(t), d, g, C, kind)
            f.write("{%r, %r, %r, %d, %r, {%r, %r}},\n" % (d, g, C, kind == "minimum", t,
                                                         float(b.real), float(b.imag)))
