"""Generate the Tracy-Widom (beta=1) quantile table in src/mpsplit/_tw_table.py.

F1(s) = det(I - K_s) on L^2(0, inf) with K_s(x, y) = Ai((x + y)/2 + s) / 2,
discretized with Gauss-Legendre nodes on a truncated interval (Bornemann 2010).
Quantiles are found by bisection on the resulting CDF.

Run from the repository root:

    python scripts/gen_tw_table.py > src/mpsplit/_tw_table.py
"""

import numpy as np
from scipy.optimize import brentq
from scipy.special import airy

N_NODES = 80
CUTOFF = 24.0


def tw1_cdf(s, n=N_NODES, cutoff=CUTOFF):
    x, w = np.polynomial.legendre.leggauss(n)
    x = (x + 1.0) * cutoff / 2.0
    w = w * cutoff / 2.0
    sw = np.sqrt(w)
    ai = airy((x[:, None] + x[None, :]) / 2.0 + s)[0] / 2.0
    return np.linalg.det(np.eye(n) - sw[:, None] * ai * sw[None, :])


def tw1_quantile(p):
    return brentq(lambda s: tw1_cdf(s) - p, -10.0, 8.0, xtol=1e-13)


def main():
    probs = np.concatenate(
        [[0.005], np.arange(0.01, 0.991, 0.01), [0.995]]
    )
    # sanity: doubling the nodes changes nothing at table precision
    for s in (-3.0, -1.27, 1.0, 2.0):
        assert abs(tw1_cdf(s) - tw1_cdf(s, n=2 * N_NODES, cutoff=1.5 * CUTOFF)) < 1e-12
    print('"""Tracy-Widom (beta=1) quantiles. Generated by scripts/gen_tw_table.py; do not edit."""')
    print()
    print("TW1_TABLE = (")
    for p in probs:
        print(f"    ({p:.3f}, {tw1_quantile(p):.12f}),")
    print(")")


if __name__ == "__main__":
    main()
