"""Columns of (B - lam I)^{-1} and eigenvectors of the adjoint.

Consecutive entry pairs x_k = (a_{2k-1}, a_{2k}) of the first inverse column
obey x_{k+1} = A1 x_k; the second column uses A2, and adjoint eigenvectors
X_k = (x_{2k-1}, x_{2k}) use C.  Sequences can be generated by forward
recurrence or from the eigen-decomposition of the companion matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .operator import OperatorParams, as_space
from .spectrum import (
    DEFAULT_TOL,
    CharRoots,
    adjoint_point_spectrum_contains,
    char_roots,
)

RENORM_LIMIT = 1e150


class DegenerateLambda(ValueError):
    """lam coincides with a diagonal entry r1 or r2."""


class Kind(str, Enum):
    A1 = "A1"
    A2 = "A2"
    C = "C"


class Origin(str, Enum):
    INVERSE_A = "InverseA"
    INVERSE_B = "InverseB"
    ADJOINT = "Adjoint"


class Mode(str, Enum):
    DISTINCT = "DistinctRoots"
    JORDAN = "Jordan"
    TZERO = "TZeroDegenerate"


@dataclass(frozen=True)
class CompanionMatrix:
    matrix: np.ndarray
    kind: Kind

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def det(self) -> complex:
        m = self.matrix
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


@dataclass(frozen=True)
class PairSequence:
    """K pairs stored as mantissas with a per-pair natural-log scale.

    The true k-th pair is ``pairs[k] * exp(log_scale[k])``; the scale is zero
    unless the generating recurrence had to renormalize.
    """

    pairs: np.ndarray
    origin: Origin
    log_scale: np.ndarray | None = None

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=complex).reshape(-1, 2)
        object.__setattr__(self, "pairs", pairs)
        if self.log_scale is None:
            object.__setattr__(self, "log_scale", np.zeros(len(pairs)))

    def __len__(self) -> int:
        return len(self.pairs)

    def values(self) -> np.ndarray:
        """True pair values (may overflow to inf for strongly growing columns)."""
        with np.errstate(over="ignore"):
            return self.pairs * np.exp(self.log_scale)[:, None]

    def flat(self) -> np.ndarray:
        return self.values().reshape(-1)

    def log_norms(self) -> np.ndarray:
        """Natural log of the max-norm of each pair (-inf for zero pairs)."""
        with np.errstate(divide="ignore"):
            return np.log(np.max(np.abs(self.pairs), axis=1)) + self.log_scale


@dataclass(frozen=True)
class RecurrenceSolution:
    mode: Mode
    roots: CharRoots
    eigvec1: np.ndarray
    eigvec2: np.ndarray
    c1: complex
    c2: complex

    def pair(self, k: int) -> np.ndarray:
        """x_k for k >= 1."""
        a = self.roots.alpha1
        if self.mode is Mode.JORDAN:
            h, u = self.eigvec1, self.eigvec2
            return self.c1 * h * a ** k + self.c2 * (h * k * a ** (k - 1) + u * a ** k)
        b = self.roots.alpha2
        return self.c1 * self.eigvec1 * a ** k + self.c2 * self.eigvec2 * b ** k


def _require_regular(params: OperatorParams, lam: complex) -> None:
    if lam == params.r1 or lam == params.r2:
        raise DegenerateLambda(f"lambda={lam} equals a diagonal entry")


def companion(params: OperatorParams, lam: complex, kind: Kind | str) -> CompanionMatrix:
    kind = Kind(kind)
    lam = complex(lam)
    _require_regular(params, lam)
    r1, r2, s1, s2, t1, t2 = params.bands()
    u, v = r1 - lam, r2 - lam
    if kind is Kind.A1:
        m = [[-t1 / u, -s2 / u],
             [s1 * t1 / (u * v), -t2 / v + s1 * s2 / (u * v)]]
    elif kind is Kind.A2:
        m = [[-t2 / v, -s1 / v],
             [s2 * t2 / (u * v), -t1 / u + s1 * s2 / (u * v)]]
    else:
        if params.t_zero:
            raise ValueError("companion C needs t1*t2 != 0")
        m = [[-u / t1, -s1 / t1],
             [s2 * u / (t1 * t2), -v / t2 + s1 * s2 / (t1 * t2)]]
    return CompanionMatrix(np.array(m, dtype=complex), kind)


def eigvec(m: np.ndarray, ev: complex) -> np.ndarray:
    """Eigenvector of a 2x2 matrix for eigenvalue ``ev``, first component 1.

    Falls back to a unit vector with its largest component real-positive when
    the first component has to vanish.
    """
    a11, a12 = m[0, 0] - ev, m[0, 1]
    a21, a22 = m[1, 0], m[1, 1] - ev
    scale = max(abs(a11), abs(a12), abs(a21), abs(a22), 1e-300)
    tiny = 1e-14 * scale
    if abs(a12) > tiny:
        return np.array([1.0, -a11 / a12], dtype=complex)
    if abs(a11) > tiny:
        # first row reads a11 * f1 = 0
        return np.array([0.0, 1.0], dtype=complex)
    if abs(a22) > tiny:
        return np.array([1.0, -a21 / a22], dtype=complex)
    return np.array([1.0, 0.0], dtype=complex)


def _initial_pair(params: OperatorParams, lam: complex, which: str) -> np.ndarray:
    u, v = params.r1 - lam, params.r2 - lam
    if which == "A":
        return np.array([1 / u, -params.s1 / (u * v)], dtype=complex)
    return np.array([1 / v, -params.s2 / (u * v)], dtype=complex)


def _check_which(which: str) -> str:
    which = str(which).upper()
    if which not in ("A", "B"):
        raise ValueError("which must be 'A' or 'B'")
    return which


def inverse_columns(params: OperatorParams, lam: complex, which: str = "A", K: int = 50) -> PairSequence:
    """First K pairs of inverse column 1 ('A') or 2 ('B') by forward recurrence."""
    which = _check_which(which)
    lam = complex(lam)
    _require_regular(params, lam)
    if K < 1:
        raise ValueError("K must be positive")
    r1, r2, s1, s2, t1, t2 = params.bands()
    u, v = r1 - lam, r2 - lam
    if which == "A":
        # odd entry: row with r1, s2, t1; even entry: row with r2, s1, t2
        d_odd, s_odd, t_odd, d_even, s_even, t_even = u, s2, t1, v, s1, t2
    else:
        d_odd, s_odd, t_odd, d_even, s_even, t_even = v, s1, t2, u, s2, t1
    pairs = np.empty((K, 2), dtype=complex)
    logs = np.zeros(K)
    x = _initial_pair(params, lam, which)
    log = 0.0
    pairs[0] = x
    for k in range(1, K):
        odd = -(t_odd * x[0] + s_odd * x[1]) / d_odd
        even = -(t_even * x[1] + s_even * odd) / d_even
        x = np.array([odd, even])
        size = max(abs(odd), abs(even))
        if size > RENORM_LIMIT:
            x = x / size
            log += math.log(size)
        pairs[k] = x
        logs[k] = log
    origin = Origin.INVERSE_A if which == "A" else Origin.INVERSE_B
    return PairSequence(pairs, origin, logs)


def _solve_constants(v1: np.ndarray, v2: np.ndarray, x1: np.ndarray) -> tuple[complex, complex]:
    """Solve c1 v1 + c2 v2 = x1 by Cramer's rule."""
    det = v1[0] * v2[1] - v2[0] * v1[1]
    if det == 0:
        raise np.linalg.LinAlgError("basis vectors are linearly dependent")
    c1 = (x1[0] * v2[1] - v2[0] * x1[1]) / det
    c2 = (v1[0] * x1[1] - x1[0] * v1[1]) / det
    return complex(c1), complex(c2)


def solve_recurrence(params: OperatorParams, lam: complex, which: str = "A") -> RecurrenceSolution:
    """Closed-form constants for the inverse column recurrence."""
    which = _check_which(which)
    lam = complex(lam)
    _require_regular(params, lam)
    roots = char_roots(params, lam)
    m = companion(params, lam, Kind.A1 if which == "A" else Kind.A2).matrix
    x1 = _initial_pair(params, lam, which)
    a1, a2 = roots.alpha1, roots.alpha2

    if params.t_zero:
        f = eigvec(m, a1)
        # alpha2 = 0 and x1 is parallel to f, so x_k = c1 f alpha1^k
        c1 = complex(x1[0] / (f[0] * a1))
        g = eigvec(m, 0.0)
        return RecurrenceSolution(Mode.TZERO, roots, f, g, c1, 0j)

    if roots.discriminant_zero:
        a = 0.5 * (a1 + a2)
        roots = CharRoots(a, a, roots.chi, True, False, roots.plus_branch)
        n = m - a * np.eye(2)
        h = eigvec(m, a)
        # minimum-norm generalized eigenvector: component along h is zero
        u = np.linalg.pinv(n, rcond=1e-7) @ h
        u = u - (np.vdot(h, u) / np.vdot(h, h)) * h
        # x_1 = P J c~ with P = [h u], J = [[a, 1], [0, a]]
        c1, c2 = _solve_constants(h * a, h + u * a, x1)
        return RecurrenceSolution(Mode.JORDAN, roots, h, u, c1, c2)

    f = eigvec(m, a1)
    g = eigvec(m, a2)
    c1, c2 = _solve_constants(f * a1, g * a2, x1)
    return RecurrenceSolution(Mode.DISTINCT, roots, f, g, c1, c2)


def closed_form(params: OperatorParams, lam: complex, which: str = "A", K: int = 50
                ) -> tuple[RecurrenceSolution, PairSequence]:
    sol = solve_recurrence(params, lam, which)
    pairs = np.array([sol.pair(k) for k in range(1, K + 1)], dtype=complex).reshape(K, 2)
    origin = Origin.INVERSE_A if _check_which(which) == "A" else Origin.INVERSE_B
    return sol, PairSequence(pairs, origin)


def decay_rate(seq: PairSequence) -> float:
    """Estimate lim sup ||x_k||^(1/k) from a log-linear fit over the tail half."""
    if len(seq) < 8:
        raise ValueError("need at least 8 pairs")
    logs = seq.log_norms()
    k = np.arange(1, len(seq) + 1, dtype=float)
    half = len(seq) // 2
    kt, lt = k[half:], logs[half:]
    ok = np.isfinite(lt)
    if ok.sum() < 2:
        raise ValueError("sequence tail is zero")
    slope = np.polyfit(kt[ok], lt[ok], 1)[0]
    return float(math.exp(slope))


def adjoint_eigenvector(params: OperatorParams, space, lam: complex, K: int = 50,
                        tol: float = DEFAULT_TOL) -> PairSequence:
    """Eigenvector of the transposed matrix in l_q for eigenvalue lam.

    Normalized so that x_1 = 1.
    """
    lam = complex(lam)
    space = as_space(space)
    if K < 2:
        raise ValueError("K must be at least 2")
    if not adjoint_point_spectrum_contains(params, space, lam, tol):
        raise ValueError(f"lambda={lam} is not in the adjoint point spectrum for p={space.p}")
    r1, r2, s1, s2, t1, t2 = params.bands()
    pairs = np.zeros((K, 2), dtype=complex)
    if lam == r1:
        pairs[0] = (1, 0)
        return PairSequence(pairs, Origin.ADJOINT)
    if lam == r2:
        pairs[0] = (1, -(r1 - r2) / s1)
        return PairSequence(pairs, Origin.ADJOINT)

    if params.t_zero:
        q = (r1 - lam) * (r2 - lam) / (s1 * s2)
        first = -(r1 - lam) / s1
        k = np.arange(K)
        pairs[:, 0] = q ** k
        pairs[:, 1] = first * q ** k
        return PairSequence(pairs, Origin.ADJOINT)

    c = companion(params, lam, Kind.C).matrix
    # smallest-modulus root of the reciprocal quadratic is 1/alpha1
    beta = 1.0 / char_roots(params, lam).alpha1
    f = eigvec(c, beta)
    powers = beta ** np.arange(K)
    pairs[:, 0] = f[0] * powers
    pairs[:, 1] = f[1] * powers
    return PairSequence(pairs, Origin.ADJOINT)


def transpose_apply(params: OperatorParams, x: np.ndarray) -> np.ndarray:
    """(B^T x)_n = r x_n + s x_{n+1} + t x_{n+2}, with zeros past the end."""
    x = np.asarray(x, dtype=complex)
    m = x.size
    r1, r2, s1, s2, t1, t2 = params.bands()
    n = np.arange(1, m + 1)
    odd = n % 2 == 1
    r = np.where(odd, r1, r2)
    s = np.where(odd, s1, s2)
    t = np.where(odd, t1, t2)
    xp = np.concatenate([x, np.zeros(2, dtype=complex)])
    return r * x + s * xp[1:m + 1] + t * xp[2:m + 2]


def adjoint_residual(params: OperatorParams, lam: complex, x) -> float:
    """max |(B^T x - lam x)_n| / ||x||_inf over rows except the last two."""
    if isinstance(x, PairSequence):
        x = x.flat()
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.size == 0:
        raise ValueError("x must be nonempty")
    nrm = np.max(np.abs(x))
    if nrm == 0:
        return 0.0
    res = transpose_apply(params, x) - complex(lam) * x
    # rows near the end see the truncation, not the operator
    interior = res[: max(x.size - 2, 1)]
    return float(np.max(np.abs(interior)) / nrm)
