"""Independent high-precision reference values for M(eps) and N(c, delta).

Scans m upward in mpmath at 60 digits. Writes crates/core/data/thresholds_golden.json.
"""
import json
import os
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 60


def holds(m, log1p):
    return mp.mpf(m) ** mp.mpf(1.5) <= mp.e ** ((mp.mpf(m) / mp.e - 1) * log1p)


def big_m(log1p):
    start = int(mp.ceil(5 * mp.e))
    mstar = 3 * mp.e / (2 * log1p)
    # above max(start, mstar) the margin only grows, so the last failure
    # below the first success past that point decides M
    top = max(start, int(mp.ceil(mstar)))
    m = top
    while not holds(m, log1p):
        m += 1
    last_fail = start - 1
    for k in range(start, m):
        if not holds(k, log1p):
            last_fail = k
    return last_fail + 1


def big_n(c, log1p, memo):
    key = (c, mp.nstr(log1p, 40))
    if key in memo:
        return memo[key]
    if c == 0:
        val = big_m(log1p)
    else:
        eps_log = mp.mpf(3) / 5 * log1p
        val = max(big_n(c - 1, eps_log, memo), big_m(eps_log), c)
    memo[key] = val
    return val


def main():
    out = {"m_epsilon": {}, "n_c_delta": {}}
    for eps in ["1", "2", "1/2", "1/4", "1/10", "1000"]:
        f = Fraction(eps)
        out["m_epsilon"][eps] = big_m(mp.log(1 + mp.mpf(f.numerator) / f.denominator))
    for d in ["1/4", "1/2", "1", "2"]:
        f = Fraction(d)
        log1p = mp.log(1 + mp.mpf(f.numerator) / f.denominator)
        memo = {}
        out["n_c_delta"][d] = [big_n(c, log1p, memo) for c in range(5)]
    path = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data", "thresholds_golden.json")
    with open(path, "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    print(json.dumps(out))


if __name__ == "__main__":
    main()
