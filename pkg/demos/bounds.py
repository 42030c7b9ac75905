"""
Bracketing the CB norm
======================

The search value is always an upper bound. Feeding random unitaries through
id_k (x) phi gives a lower bound, because unitaries have norm one and the CB
norm of a map into M_k is reached at that level. Together they bracket the
true value even when no closed form exists.
"""

import numpy as np

import cbnorm

rng = np.random.default_rng(3)


def gauss(r, c):
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


# a generic map M_2 -> M_3 with three terms
phi = cbnorm.GCKRep(2, 3, tuple((gauss(3, 2), gauss(2, 3)) for _ in range(3)))
print("CP?                ", cbnorm.is_cp(phi))

for its in (100, 1000):
    rep = cbnorm.bounds_report(phi, cbnorm.SearchConfig(iterations=its, refine=True))
    print(f"{its:>5} samples  lower {rep.cb_lower:.4f}  upper {rep.cb_upper:.4f}")

# the plain operator norm sits below the CB norm, at most cap_factor times smaller
print("||phi|| >=         ", round(rep.phi_norm_lower, 4))
print("cap factor         ", rep.cap_factor)
