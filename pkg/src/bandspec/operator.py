"""Period-2 lower-triangular triple-band operator B(r1,r2;s1,s2;t1,t2).

The infinite matrix has r1, r2 alternating on the diagonal, s1, s2 on the
first subdiagonal and t1, t2 on the second subdiagonal::

    r1  0   0   0  ...
    s1  r2  0   0  ...
    t1  s2  r1  0  ...
    0   t2  s1  r2 ...

Parameters are stored in *normalized* form: if both s-entries lie off the
principal half-plane they are negated together and ``s_flipped`` records it.
Conjugation by diag(1, -1, 1, -1, ...) negates exactly the s-band, so every
spectral set is unchanged by this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ParameterError(ValueError):
    """Raised for band parameters outside the operator's admissible class."""


def _on_principal_branch(z: complex) -> bool:
    # sqrt(z**2) == z  <=>  Re z > 0, or Re z == 0 and Im z >= 0
    return z.real > 0 or (z.real == 0 and z.imag >= 0)


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class OperatorParams:
    r1: complex
    r2: complex
    s1: complex
    s2: complex
    t1: complex
    t2: complex
    s_flipped: bool = False

    @property
    def t_zero(self) -> bool:
        return self.t1 == 0 and self.t2 == 0

    def bands(self, original: bool = False) -> tuple[complex, ...]:
        """Return (r1, r2, s1, s2, t1, t2); ``original`` undoes the s-flip."""
        sign = -1 if (original and self.s_flipped) else 1
        return (self.r1, self.r2, sign * self.s1, sign * self.s2, self.t1, self.t2)

    def as_dict(self, original: bool = False) -> dict:
        names = ("r1", "r2", "s1", "s2", "t1", "t2")
        out = {k: [v.real, v.imag] for k, v in zip(names, self.bands(original))}
        out["s_flipped"] = self.s_flipped
        return out


def validate_params(r1, r2, s1, s2, t1, t2) -> OperatorParams:
    """Check the admissibility conditions and normalize the s-band branch.

    Raises ParameterError when s1 or s2 vanishes, when exactly one of t1, t2
    vanishes, or when only one of s1, s2 is off the principal branch (a
    single-entry flip is not an s-band similarity).
    """
    vals = [complex(v) for v in (r1, r2, s1, s2, t1, t2)]
    if not all(_finite(v) for v in vals):
        raise ParameterError("band parameters must be finite")
    r1, r2, s1, s2, t1, t2 = vals
    if s1 == 0:
        raise ParameterError("s1 must be non-zero")
    if s2 == 0:
        raise ParameterError("s2 must be non-zero")
    if (t1 == 0) != (t2 == 0):
        raise ParameterError("t1 and t2 must be both zero or both non-zero")

    ok1, ok2 = _on_principal_branch(s1), _on_principal_branch(s2)
    flipped = False
    if not ok1 and not ok2:
        s1, s2 = -s1, -s2
        flipped = True
    elif ok1 != ok2:
        bad = "s1" if not ok1 else "s2"
        raise ParameterError(
            f"{bad} is off the principal square-root branch while the other "
            "s-entry is not; only a simultaneous sign flip preserves the spectrum"
        )
    # -0.0 imaginary parts would put later square roots on the wrong side
    s1 = complex(s1.real + 0.0, s1.imag + 0.0)
    s2 = complex(s2.real + 0.0, s2.imag + 0.0)
    return OperatorParams(r1, r2, s1, s2, t1, t2, flipped)


@dataclass(frozen=True)
class SpaceIndex:
    """Exponent p of l_p together with its conjugate q (q = inf when p = 1)."""

    p: float
    q: float

    @classmethod
    def of(cls, p: float) -> "SpaceIndex":
        p = float(p)
        if not (1.0 <= p < math.inf):
            raise ValueError(f"p must satisfy 1 <= p < inf, got {p}")
        q = math.inf if p == 1.0 else p / (p - 1.0)
        return cls(p, q)

    @property
    def is_l1(self) -> bool:
        return self.p == 1.0


def as_space(space) -> SpaceIndex:
    return space if isinstance(space, SpaceIndex) else SpaceIndex.of(space)


@dataclass(frozen=True)
class NormBounds:
    lower: float
    upper: float
    exact: float | None = None


def entry(params: OperatorParams, row: int, col: int, original: bool = False) -> complex:
    """Matrix entry at 1-based (row, col)."""
    if row < 1 or col < 1:
        raise IndexError("rows and columns are 1-based")
    r1, r2, s1, s2, t1, t2 = params.bands(original)
    d = row - col
    odd = row % 2 == 1
    if d == 0:
        return r1 if odd else r2
    if d == 1:
        return s2 if odd else s1
    if d == 2:
        return t1 if odd else t2
    return 0j


@dataclass(frozen=True)
class TruncatedOperator:
    """Leading n x n section kept in band storage.

    ``diag[i]``, ``sub1[i]``, ``sub2[i]`` hold entries (i, i), (i+1, i) and
    (i+2, i) in 0-based indexing, all with normalized s-values.
    """

    n: int
    diag: np.ndarray
    sub1: np.ndarray
    sub2: np.ndarray
    s_flipped: bool = False

    def toarray(self, original: bool = False) -> np.ndarray:
        n = self.n
        sub1 = self.sub1
        if original and self.s_flipped:
            sub1 = -sub1
        a = np.zeros((n, n), dtype=complex)
        idx = np.arange(n)
        a[idx, idx] = self.diag
        a[idx[1:], idx[:-1]] = sub1
        a[idx[2:], idx[:-2]] = self.sub2
        return a


def truncate(params: OperatorParams, n: int) -> TruncatedOperator:
    if n < 1:
        raise ValueError("n must be positive")
    rows = np.arange(1, n + 1)
    odd = rows % 2 == 1
    diag = np.where(odd, params.r1, params.r2).astype(complex)
    # entry (i+1, i): s1 when row i+1 is even, i.e. column i odd
    sub1 = np.where(odd[:-1], params.s1, params.s2).astype(complex)
    # entry (i+2, i): row parity equals column parity
    sub2 = np.where(odd[:-2], params.t1, params.t2).astype(complex)
    return TruncatedOperator(n, diag, sub1, sub2, params.s_flipped)


def apply(params: OperatorParams, x: Sequence[complex], original: bool = False) -> np.ndarray:
    """Action of B on a finitely supported vector.

    Output has length len(x) + 2, so it holds the full image of x.
    """
    x = np.asarray(x, dtype=complex)
    m = x.size
    if m == 0:
        return np.zeros(0, dtype=complex)
    r1, r2, s1, s2, t1, t2 = params.bands(original)
    # two virtual leading zeros x_{-1} = x_0 = 0, two trailing zeros for the tail rows
    xp = np.concatenate([np.zeros(2, dtype=complex), x, np.zeros(2, dtype=complex)])
    n_out = m + 2
    rows = np.arange(1, n_out + 1)
    odd = rows % 2 == 1
    r = np.where(odd, r1, r2)
    s = np.where(odd, s2, s1)
    t = np.where(odd, t1, t2)
    cur = xp[2:2 + n_out]
    prev1 = xp[1:1 + n_out]
    prev2 = xp[0:n_out]
    return r * cur + s * prev1 + t * prev2


def norm_bounds_lp(params: OperatorParams, space) -> NormBounds:
    space = as_space(space)
    p = space.p
    r1, r2, s1, s2, t1, t2 = (abs(v) for v in params.bands())
    lower = max(
        (r1 ** p + s1 ** p + t1 ** p) ** (1.0 / p),
        (r2 ** p + s2 ** p + t2 ** p) ** (1.0 / p),
    )
    upper = max(r1, r2) + max(s1, s2) + max(t1, t2)
    exact = max(r1 + s1 + t1, r2 + s2 + t2) if space.is_l1 else None
    return NormBounds(lower, upper, exact)
