#!/usr/bin/env python3
"""Fano factor of the Markov three-state cycle from the rate generator.

States: empty -> exciton (Gamma_L), exciton -> charged (gamma), charged -> empty (Gamma_R); jumps
through Gamma_R are counted. With L the generator, J the counted-jump matrix and p the stationary
state,
    S(w)/2eI = 1 + [1^T J (i w - L)^+ J p + 1^T J (-i w - L)^+ J p] / (1^T J p)
where ( )^+ is the inverse for w != 0 and the group (Drazin) inverse at w = 0. The resolvent is
nearly singular for small w, so the algebra runs in mpmath at 40 digits; numpy only draws the cases.
"""
import sys

import mpmath as mp
import numpy as np

mp.mp.dps = 40


def fano(gL, gR, gam, w):
    gL, gR, gam, w = map(mp.mpf, (gL, gR, gam, w))
    L = mp.matrix([[-gL, 0, gR], [gL, -gam, 0], [0, gam, -gR]])
    J = mp.matrix(3, 3)
    J[0, 2] = gR
    # stationary state of the cycle: flux through each link is equal
    p = mp.matrix([1 / gL, 1 / gam, 1 / gR])
    p /= sum(p)
    one = mp.matrix([[1, 1, 1]])
    I = (one * J * p)[0]

    def res(z):
        if z == 0:
            P = p * one
            return mp.inverse(P - L) - P
        return mp.inverse(z * mp.eye(3) - L)

    acc = (one * J * res(1j * w) * J * p)[0] + (one * J * res(-1j * w) * J * p)[0]
    return float(1 + mp.re(acc) / I)


def main():
    rng = np.random.default_rng(20260121)
    rows = []
    for _ in range(100):
        gL, gR, gam = (float(x) for x in 10 ** rng.uniform(-3, 0, size=3))
        w = 0.0 if rng.uniform() < 0.1 else float(10 ** rng.uniform(-4, 0.5) * rng.choice([-1.0, 1.0]))
        rows.append(f"{{{gL!r}, {gR!r}, {gam!r}, {w!r}, {fano(gL, gR, gam, w)!r}}},")
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/markov_reference.inc"
    with open(out, "w") as fh:
        fh.write("// Gamma_L, Gamma_R, gamma, omega, S/2eI (rate generator, mpmath 40 digits)\n")
        fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
