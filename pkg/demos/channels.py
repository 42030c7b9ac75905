"""
Completely positive maps and channels
=====================================

For a completely positive map the CB norm is just ||phi(I)||, so no search
is needed. A trace-preserving channel has a unital dual, and its diamond norm
is therefore exactly one.
"""

import numpy as np

import cbnorm

paulis = [
    np.eye(2),
    np.array([[0, 1], [1, 0]]),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]]),
]

# depolarizing channel with strength q
q = 0.3
kraus = [np.sqrt(1 - 3 * q / 4) * paulis[0]] + [np.sqrt(q / 4) * P for P in paulis[1:]]
channel = cbnorm.from_kraus(kraus)

print("is CP              ", cbnorm.is_cp(channel))
print("phi(I)             ", np.round(cbnorm.apply(channel, np.eye(2)), 12).real.tolist())
est = cbnorm.diamond_norm(channel)
print("diamond norm       ", est.value, "exact" if est.exact else "estimate")

# a CP map that is not trace preserving: X -> 4X
scaled = cbnorm.from_kraus([2 * np.eye(2)])
print("cb norm of 4X      ", cbnorm.cb_norm(scaled).value)

# distance between two channels is no longer CP, so the search runs
identity = cbnorm.identity_map(2)
diff = cbnorm.subtract(channel, identity)
print("difference is CP   ", cbnorm.is_cp(diff))
est = cbnorm.diamond_norm(diff, cbnorm.SearchConfig(iterations=500, refine=True))
print("||depol - id||_dia <=", round(est.value, 5))
# known value for the depolarizing channel: 3q/2
print("expected            ", round(1.5 * q, 12))
