"""
Distance between two unitary channels
=====================================

The diamond distance of X -> U X U^dag and X -> V X V^dag only depends on
the spectrum of V^dag U. We draw a few random pairs and compare the exact
disc diameter with the search, with and without refinement.
"""

import numpy as np

import cbnorm
from cbnorm.numerics import haar_unitary

rng = np.random.default_rng(1)
cfg = cbnorm.SearchConfig(iterations=1000, seed=0)
cfg_refined = cbnorm.SearchConfig(iterations=1000, seed=0, refine=True)

print(f"{'n':>2} {'exact':>9} {'search':>9} {'refined':>9}")
for n in (2, 3, 4, 4):
    U, V = haar_unitary(n, rng), haar_unitary(n, rng)
    phi = cbnorm.from_unitary_pair(U, V)
    exact = cbnorm.unitary_pair_norm(U, V)
    plain = cbnorm.diamond_norm(phi, cfg).value
    refined = cbnorm.diamond_norm(phi, cfg_refined).value
    print(f"{n:>2} {exact:9.5f} {plain:9.5f} {refined:9.5f}")

# the eigenvalues and the enclosing disc behind one of these numbers
lam = cbnorm.closedform.unitary_eigenvalues(V.conj().T @ U)
disc = cbnorm.smallest_enclosing_disc(lam)
print("eigenvalue angles  ", np.round(np.angle(lam), 3))
print("disc center, radius", np.round(disc.center, 4), round(disc.radius, 5))
