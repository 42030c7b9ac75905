"""
Exact norm of ``X -> U X U^dag - V X V^dag``.

The CB norm (equivalently the diamond norm) of ``X -> U X U^dag - X`` is the
diameter of the smallest closed disc containing the spectrum of ``U``.  Two
independent routes are computed and cross-checked:

* Welzl's minidisc algorithm on the eigenvalues, and
* the rotation formula ``2 sqrt(1 - r^2)`` (or ``2`` when ``r <= 0``), where
  ``r`` is the largest achievable minimum real part of ``e^{i alpha} lambda_j``.
"""

import math
import random
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, InconsistencyError, ValidationError
from .numerics import as_matrix, is_unitary

UNIT_MODULUS_TOL = 1e-8
ANGLE_DEDUP_TOL = 1e-10
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains(self, z, eps=1e-12):
        return abs(z - self.center) <= self.radius + eps


def _contains(disc, z):
    # relative slack keeps the incremental algorithm from looping on rounding noise
    return abs(z - disc.center) <= disc.radius * (1 + 1e-12) + 1e-14


def _diameter_disc(a, b):
    c = 0.5 * (a + b)
    return Disc(c, max(abs(a - c), abs(b - c)))


def _circumdisc(a, b, c):
    ax, ay = a.real, a.imag
    bx, by = b.real - ax, b.imag - ay
    cx, cy = c.real - ax, c.imag - ay
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        return None
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ox = (cy * b2 - by * c2) / d
    oy = (bx * c2 - cx * b2) / d
    center = complex(ax + ox, ay + oy)
    return Disc(center, max(abs(center - a), abs(center - b), abs(center - c)))


def _cross(a, b, c):
    return (b.real - a.real) * (c.imag - a.imag) - (b.imag - a.imag) * (c.real - a.real)


def _disc_two_fixed(points, p, q):
    # boundary passes through p and q; keep the most extreme circumcircle on each side of pq
    base = _diameter_disc(p, q)
    left = right = None
    for r in points:
        if _contains(base, r):
            continue
        side = _cross(p, q, r)
        circ = _circumdisc(p, q, r)
        if circ is None:
            continue
        offset = _cross(p, q, circ.center)
        if side > 0 and (left is None or offset > _cross(p, q, left.center)):
            left = circ
        elif side < 0 and (right is None or offset < _cross(p, q, right.center)):
            right = circ
    if left is None and right is None:
        return base
    if left is None:
        return right
    if right is None:
        return left
    return left if left.radius <= right.radius else right


def _disc_one_fixed(points, p):
    disc = Disc(p, 0.0)
    for i, q in enumerate(points):
        if not _contains(disc, q):
            disc = _disc_two_fixed(points[:i], p, q) if i else _diameter_disc(p, q)
    return disc


def smallest_enclosing_disc(points, seed=0):
    """
    Smallest closed disc containing a finite set of complex numbers.

    Welzl's incremental algorithm over a seeded shuffle, so the result is
    deterministic for a given ``seed``.

    :param points: non-empty iterable of complex numbers.
    :return: :class:`Disc`.
    """
    pts = [complex(z) for z in points]
    if not pts:
        raise ValidationError("at least one point is required")
    random.Random(seed).shuffle(pts)
    disc = None
    for i, p in enumerate(pts):
        if disc is None or not _contains(disc, p):
            disc = _disc_one_fixed(pts[:i], p)
    return disc


def _validated_unit(eigs):
    z = np.asarray(list(eigs), dtype=complex).ravel()
    if z.size == 0:
        raise ValidationError("at least one eigenvalue is required")
    mod = np.abs(z)
    if np.any(np.abs(mod - 1.0) > UNIT_MODULUS_TOL):
        raise ValidationError(
            f"eigenvalues must have unit modulus (max deviation {np.max(np.abs(mod - 1.0)):.2e})"
        )
    return z / mod


def max_min_real_rotation(eigs):
    """
    Best rotation of a set of unit-modulus numbers towards the positive real axis.

    Returns ``(r, alpha)`` with ``r = max_alpha min_j Re(e^{i alpha} lambda_j)``.
    The points are covered by the arc complementary to their largest angular
    gap; rotating that arc so it is centred on angle 0 is optimal, and
    ``r = cos(beta / 2)`` with ``beta`` the arc length.
    """
    z = _validated_unit(eigs)
    theta = np.sort(np.mod(np.angle(z), 2 * np.pi))
    # drop near-duplicate angles, including the wrap-around pair
    keep = np.concatenate(([True], np.diff(theta) > ANGLE_DEDUP_TOL))
    theta = theta[keep]
    if theta.size > 1 and (theta[0] + 2 * np.pi - theta[-1]) <= ANGLE_DEDUP_TOL:
        theta = theta[:-1]
    if theta.size == 1:
        return 1.0, float(-theta[0])
    gaps = np.diff(np.concatenate((theta, [theta[0] + 2 * np.pi])))
    g = int(np.argmax(gaps))
    beta = 2 * np.pi - gaps[g]
    # covering arc runs from theta[g+1] counter-clockwise to theta[g]
    start = theta[(g + 1) % theta.size]
    mid = start + beta / 2
    alpha = float(np.mod(-mid + np.pi, 2 * np.pi) - np.pi)
    return float(np.cos(beta / 2)), alpha


def rotation_formula_norm(r):
    """``2`` if ``r <= 0`` else ``2 sqrt(1 - r^2)``."""
    if r <= 0:
        return 2.0
    return 2.0 * math.sqrt(max(0.0, 1.0 - r * r))


def unitary_eigenvalues(U):
    """Eigenvalues of a unitary from its complex Schur form, renormalised to the unit circle."""
    T, _ = scipy.linalg.schur(np.asarray(U, dtype=complex), output="complex")
    lam = np.diag(T)
    mod = np.abs(lam)
    if np.any(np.abs(mod - 1.0) > UNIT_MODULUS_TOL):
        raise ValidationError("matrix has eigenvalues off the unit circle")
    return lam / mod


def _check_unitary(U, name):
    U = as_matrix(U, name)
    if U.shape[0] != U.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {U.shape}")
    if not is_unitary(U, UNIT_MODULUS_TOL):
        raise ValidationError(f"{name} is not unitary")
    return U


def unitary_diff_norm(U):
    """
    CB norm of ``X -> U X U^dag - X``.

    :raises ValidationError: if ``U`` is not unitary to ``1e-8``.
    :raises InconsistencyError: if the disc diameter and the rotation formula
        disagree by more than ``1e-9``.
    """
    U = _check_unitary(U, "U")
    lam = unitary_eigenvalues(U)
    # points on the unit circle: anything above 2 is rounding
    diameter = min(smallest_enclosing_disc(lam).diameter, 2.0)
    r, _ = max_min_real_rotation(lam)
    formula = rotation_formula_norm(r)
    if abs(diameter - formula) > CROSS_CHECK_TOL:
        raise InconsistencyError(
            f"enclosing-disc diameter {diameter!r} disagrees with rotation formula {formula!r}"
        )
    return diameter


def unitary_pair_norm(U, V):
    """CB norm of ``X -> U X U^dag - V X V^dag``, reduced to ``V^dag U`` by unitary invariance."""
    U = _check_unitary(U, "U")
    V = _check_unitary(V, "V")
    if U.shape != V.shape:
        raise DimensionError(f"U and V differ in size: {U.shape} vs {V.shape}")
    return unitary_diff_norm(V.conj().T @ U)
