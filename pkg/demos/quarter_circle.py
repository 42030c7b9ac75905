"""
A unitary difference with a known answer
========================================

The map X -> U X U^dag - X with U = diag(e^{3i pi/4}, e^{i pi}, e^{5i pi/4})
has CB norm sqrt(2): the eigenvalues of U sit on a quarter circle, and the
smallest disc around them has that diameter. Here the exact value is set
against the randomized search and its local refinement.
"""

import numpy as np

import cbnorm

angles = np.array([3 * np.pi / 4, np.pi, 5 * np.pi / 4])
U = np.diag(np.exp(1j * angles))
phi = cbnorm.from_unitary_pair(U, np.eye(3))

# exact answer, two ways internally
exact = cbnorm.unitary_diff_norm(U)
print("closed form        ", exact)

# the reduction keeps two terms, because U is not a multiple of I
red = cbnorm.make_lin_indep(phi)
print("tensor rank        ", red.p)

# 100 random mixing matrices, a few seeds
for seed in range(5):
    est = cbnorm.cb_norm(phi, cbnorm.SearchConfig(iterations=100, seed=seed))
    print(f"seed {seed}, 100 its    {est.value:.4f}")

# the same search followed by pattern-search refinement
est = cbnorm.cb_norm(phi, cbnorm.SearchConfig(iterations=100, refine=True))
print("with refinement    ", est.value, " gap", est.value - exact)

# how the best value drops along the search
trace = cbnorm.cb_norm(phi, cbnorm.SearchConfig(iterations=1000)).trace
for i in (0, 9, 99, 999):
    print(f"best after {i + 1:>4} samples: {trace[i][1]:.5f}")
