#!/usr/bin/env python3
"""Slab phonon roots from the tan-ratio form of the Rayleigh-Lamb equations.

    dilatational  tan(q_t/2)/tan(q_l/2) = -4 Q^2 q_l q_t / (Q^2 - q_t^2)^2
    flexural      tan(q_t/2)/tan(q_l/2) = -(Q^2 - q_t^2)^2 / (4 Q^2 q_l q_t)

Written with X(q) = q tan(q/2) and Y(q) = tan(q/2)/q, both real whether q is real or imaginary:
    dilatational  Y(q_t)(Q^2 - q_t^2)^2 + 4 Q^2 X(q_l) = 0
    flexural      4 Q^2 X(q_t) + (Q^2 - q_t^2)^2 Y(q_l) = 0
Sign changes on a fine W scan are refined at 40 digits; tan poles are rejected by the residual size.
"""
import sys

import mpmath as mp

mp.mp.dps = 40
RATIO = mp.mpf(2)
W_HI = mp.mpf(12)


def X(q2):
    q = mp.sqrt(q2)
    return mp.re(q * mp.tan(q / 2))


def Y(q2):
    if q2 == 0:
        return mp.mpf(1) / 2
    q = mp.sqrt(q2)
    return mp.re(mp.tan(q / 2) / q)


def residual(family, Q, W):
    ql2 = W**2 / RATIO**2 - Q**2
    qt2 = W**2 - Q**2
    if family == "dilatational":
        return Y(qt2) * (Q**2 - qt2) ** 2 + 4 * Q**2 * X(ql2)
    return 4 * Q**2 * X(qt2) + (Q**2 - qt2) ** 2 * Y(ql2)


def roots(family, Q):
    N = 6000
    lo = mp.mpf("1e-4")
    xs = [lo + (W_HI - lo) * i / N for i in range(N + 1)]
    fs = [residual(family, Q, x) for x in xs]
    out = []
    for i in range(N):
        if (fs[i] > 0) != (fs[i + 1] > 0):
            r = mp.findroot(lambda w: residual(family, Q, w), (xs[i], xs[i + 1]), solver="illinois", verify=False)
            scale = abs(fs[i]) + abs(fs[i + 1])
            if abs(residual(family, Q, r)) < mp.mpf("1e-25") * max(scale, 1):
                out.append(r)
    return out


def main():
    rows = []
    for family in ("dilatational", "flexural"):
        for Q in ("0.5", "1", "1.6", "2.5", "4"):
            rs = roots(family, mp.mpf(Q))
            rows.append(f"{{{0 if family == 'dilatational' else 1}, {Q}, {len(rs)}, {{"
                        + ", ".join(mp.nstr(r, 20) for r in rs) + "}},")
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/phonon_reference.inc"
    with open(out, "w") as fh:
        fh.write("// family (0 dilatational, 1 flexural), Q, root count, W roots in (0, 12] at c_l/c_t = 2\n")
        fh.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
