#!/usr/bin/env python3
"""Generate the frozen Mittag-Leffler reference table used by the tests.

Brute-force oracle, independent of the package's evaluator: a plain mpmath
term-by-term series wherever the predicted cancellation stays affordable
(working precision sized from the peak-term estimate), and an mpmath
algebraic tail expansion with a certified monotone-term bound elsewhere.
Every row records the method and its certified error estimate; rows are
only emitted when that estimate clears 1e-13.

Run from the repository root:  python3 tools/make_ml_reference.py
Writes tests/data/ml_reference.csv (alpha,beta,z,re,method,est_err).
"""

import csv
import math
import pathlib

import mpmath as mp

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "ml_reference.csv"

ALPHAS = (0.3, 0.5, 0.8, 1.0)
N_PER_ALPHA = 50
Z_LO, Z_HI = -50.0, 5.0
SERIES_DIGIT_CAP = 320


def digits_lost(alpha: float, beta: float, r: float) -> float:
    if r <= 1.0:
        return 0.0
    y = r ** (1.0 / alpha)
    kp = max(1.0, (y - beta) / alpha)
    ln_peak = kp * math.log(r) - math.lgamma(beta + alpha * kp)
    ln_mag = -max(2.0 * math.log(r) + 6.0, r if alpha == 1.0 else 0.0)
    return max(0.0, (ln_peak - ln_mag) / math.log(10.0))


def series_oracle(alpha, beta, z, dps):
    with mp.workdps(dps):
        a_, b_, z_ = mp.mpf(alpha), mp.mpf(beta), mp.mpf(z)
        s = mp.mpf(0)
        zk = mp.mpf(1)
        k = 0
        quiet = 0
        while True:
            t = zk * mp.rgamma(b_ + a_ * k)
            s += t
            zk *= z_
            k += 1
            if abs(t) < abs(s) * mp.mpf(10) ** (-40):
                quiet += 1
                if quiet > 8:
                    return float(s), 1e-35
            else:
                quiet = 0
            if k > 2_000_000:
                raise RuntimeError("series oracle did not settle")


def asymptotic_oracle(alpha, beta, z, n_max=80):
    # E(a,b;z) ~ -sum z^{-k}/Gamma(b - a k); certified by the smallest term
    with mp.workdps(60):
        zm = mp.mpf(z)
        total = mp.mpf(0)
        last = None
        omitted = None
        for k in range(1, n_max + 1):
            coef = mp.rgamma(mp.mpf(beta) - mp.mpf(alpha) * k)
            arg = beta - alpha * k
            if abs(arg - round(arg)) < 1e-9 and round(arg) <= 0:
                coef = mp.mpf(0)
            t = -zm ** (-k) * coef
            m = abs(t)
            if m > 0 and last is not None and m > last:
                omitted = m
                break
            total += t
            if m > 0:
                last = m
        if omitted is None:
            omitted = last
        est = float(omitted / abs(total)) if abs(total) > 0 else math.inf
        return float(total), est


def main():
    OUT.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    for alpha in ALPHAS:
        for i in range(N_PER_ALPHA):
            z = Z_LO + (Z_HI - Z_LO) * i / (N_PER_ALPHA - 1)
            loss = digits_lost(alpha, alpha, abs(z)) if z < 0 else 0.0
            if loss <= SERIES_DIGIT_CAP:
                val, est = series_oracle(alpha, alpha, z, dps=int(40 + 1.1 * loss))
                method = "series"
            else:
                val, est = asymptotic_oracle(alpha, alpha, z)
                method = "asymptotic"
            if est > 1e-13:
                raise RuntimeError(
                    f"oracle not certified at alpha={alpha}, z={z}: est={est:.2e}")
            rows.append((alpha, alpha, z, val, method, est))
            print(f"alpha={alpha} z={z:8.3f} {method:10s} est={est:.1e}")
    with open(OUT, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["alpha", "beta", "z", "re", "method", "est_err"])
        for a, b, z, v, m, e in rows:
            wr.writerow([f"{a:.17g}", f"{b:.17g}", f"{z:.17g}", f"{v:.17e}", m,
                         f"{e:.3e}"])
    print(f"wrote {len(rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
