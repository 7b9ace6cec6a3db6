"""Coordinatewise Riesz-space arithmetic on R^n.

Vectors are plain 1-D numpy arrays carrying the coordinatewise order:
x <= y iff x_i <= y_i for every i.  Two scalar modes are supported and are
selected by the array dtype:

* ``float64`` arrays for numerical work, and
* ``object`` arrays of :class:`fractions.Fraction` for exact work on the
  polyhedral code paths.

All operations are pure functions on immutable values and are safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

#: Tolerance for the lattice identity oracle (float mode).
RIESZ_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """Raised when two vectors of different dimensions are combined."""


def as_vector(coords, exact: bool = False) -> np.ndarray:
    """Coerce ``coords`` to a 1-D vector.

    Scalars given as strings (``"3/4"``) or :class:`Fraction` force or join
    the exact mode; with ``exact=True`` every entry is converted to
    :class:`Fraction`.
    """
    if isinstance(coords, np.ndarray) and coords.ndim == 1 and not exact:
        return coords
    items = list(coords)
    if exact or any(isinstance(c, (str, Fraction)) for c in items):
        out = np.empty(len(items), dtype=object)
        for i, c in enumerate(items):
            out[i] = c if isinstance(c, Fraction) else Fraction(str(c) if isinstance(c, str) else c)
        return out
    return np.asarray(items, dtype=float)


def is_exact(x: np.ndarray) -> bool:
    return getattr(x, "dtype", None) == object


def _check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if len(x) != len(y):
        raise DimensionMismatchError(f"dimension mismatch: {len(x)} vs {len(y)}")


def pos_part(x: np.ndarray) -> np.ndarray:
    """Coordinatewise supremum of x and 0."""
    return np.maximum(x, 0)


def neg_part(x: np.ndarray) -> np.ndarray:
    """Coordinatewise supremum of -x and 0."""
    return np.maximum(-x, 0)


def modulus(x: np.ndarray) -> np.ndarray:
    """Coordinatewise |x|; equals pos_part(x) + neg_part(x)."""
    return np.abs(x)


def meet(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Coordinatewise infimum."""
    _check_same_dim(x, y)
    return np.minimum(x, y)


def join(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Coordinatewise supremum."""
    _check_same_dim(x, y)
    return np.maximum(x, y)


def project(x: np.ndarray, indices) -> np.ndarray:
    """Zero every coordinate outside ``indices`` (0-based).

    ``project(x, ())`` is the zero vector; the full index set is the
    identity.  The map is linear and idempotent.
    """
    idx = sorted(set(int(i) for i in indices))
    if idx and (idx[0] < 0 or idx[-1] >= len(x)):
        raise IndexError(f"index out of range for dimension {len(x)}: {idx}")
    mask = np.zeros(len(x), dtype=bool)
    mask[idx] = True
    if is_exact(x):
        out = np.array([xi if m else Fraction(0) for xi, m in zip(x, mask)], dtype=object)
        return out
    out = np.zeros_like(x)
    out[mask] = x[mask]
    return out


def support(x: np.ndarray, tol: float = 0.0) -> tuple[int, ...]:
    """Indices of the coordinates with |x_i| > tol."""
    return tuple(i for i, xi in enumerate(x) if abs(xi) > tol)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of the lattice identity oracle."""

    ok: bool
    failed: str | None
    errors: dict = field(default_factory=dict)

    def __str__(self) -> str:
        if self.ok:
            return "all lattice identities hold"
        return f"identity violated: {self.failed} (error {self.errors.get(self.failed)})"


def _max_abs(v: np.ndarray) -> float:
    if len(v) == 0:
        return 0.0
    return float(max(abs(c) for c in v))


def riesz_identity_check(x: np.ndarray, y: np.ndarray, s=1.0, t=1.0,
                         tol: float = RIESZ_TOL) -> IdentityReport:
    """Verify the standard lattice identities coordinatewise.

    Checks, in order: the positive/negative part decomposition of x, the
    modulus sum, disjointness of the parts, the modulus-of-difference
    identity, the half-sum formulas for meet and join, the two modulus
    meet/join formulas, and, when x, y >= 0 with meet(x, y) = 0, the
    disjoint scaling rule |s x + t y| = |s| x + |t| y.

    Returns a report naming the first violated identity, if any.
    """
    _check_same_dim(x, y)
    if is_exact(x) or is_exact(y):
        x = as_vector(x, exact=True)
        y = as_vector(y, exact=True)
        s = s if isinstance(s, Rational) else Fraction(str(s))
        t = t if isinstance(t, Rational) else Fraction(str(t))
        half = Fraction(1, 2)
        zero_tol = 0
    else:
        half = 0.5
        zero_tol = tol

    xp, xn, xa = pos_part(x), neg_part(x), modulus(x)
    checks: list[tuple[str, np.ndarray]] = [
        ("pos-minus-neg", (xp - xn) - x),
        ("modulus-sum", (xp + xn) - xa),
        ("parts-disjoint", meet(xp, xn)),
        ("diff-modulus", modulus(x - y) - (join(x, y) - meet(x, y))),
        ("meet-half-formula", meet(x, y) - half * (x + y - modulus(x - y))),
        ("join-half-formula", join(x, y) - half * (x + y + modulus(x - y))),
        ("modulus-meet",
         meet(xa, modulus(y)) - half * modulus(modulus(x + y) - modulus(x - y))),
        ("modulus-join",
         join(xa, modulus(y)) - half * modulus(modulus(x + y) + modulus(x - y))),
    ]
    disjoint_nonneg = (all(c >= 0 for c in x) and all(c >= 0 for c in y)
                       and _max_abs(meet(x, y)) <= zero_tol)
    if disjoint_nonneg:
        checks.append(
            ("disjoint-scaling",
             modulus(s * x + t * y) - (abs(s) * x + abs(t) * y)))

    errors = {}
    failed = None
    for name, residual in checks:
        err = _max_abs(residual)
        errors[name] = float(err)
        if failed is None and err > zero_tol:
            failed = name
    return IdentityReport(ok=failed is None, failed=failed, errors=errors)
