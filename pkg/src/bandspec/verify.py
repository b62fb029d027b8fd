"""Finite-section oracles that cross-check the analytic predicates.

None of these routines evaluate the closed-form spectral quotient: they work
from matrix entries only (forward substitution, row reduction, explicit
products) so that agreement with :mod:`bandspec.spectrum` is meaningful.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np
from scipy.linalg import solve_triangular

from .operator import OperatorParams, apply, as_space, truncate
from .recurrence import RENORM_LIMIT, DegenerateLambda, Origin, PairSequence, decay_rate
from .spectrum import in_spectrum

DEFAULT_BAND = 0.05
PIVOT_RTOL = 1e-10


class Numeric(str, Enum):
    IN_SPECTRUM = "InSpectrum"
    RESOLVENT = "Resolvent"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class OracleVerdict:
    lam: complex
    analytic: bool
    numeric: Numeric
    growth_exponent: float
    n_used: int

    @property
    def agrees(self) -> bool:
        if self.numeric is Numeric.INCONCLUSIVE:
            return True
        return self.analytic == (self.numeric is Numeric.IN_SPECTRUM)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = {"re": self.lam.real, "im": self.lam.imag}
        del d["lam"]
        d["numeric"] = self.numeric.value
        g = self.growth_exponent
        d["growth_exponent"] = g if math.isfinite(g) else None
        return d


def _require_regular(params: OperatorParams, lam: complex) -> None:
    if lam == params.r1 or lam == params.r2:
        raise DegenerateLambda(f"lambda={lam} equals a diagonal entry")


def inverse_truncation(params: OperatorParams, lam: complex, n: int) -> np.ndarray:
    """Inverse of the n x n section of B - lam I (lower triangular)."""
    lam = complex(lam)
    _require_regular(params, lam)
    m = truncate(params, n).toarray() - lam * np.eye(n)
    return solve_triangular(m, np.eye(n, dtype=complex), lower=True)


def first_column_logscaled(params: OperatorParams, lam: complex, n: int) -> tuple[np.ndarray, np.ndarray]:
    """First column of the section inverse by banded forward substitution.

    Returns (mantissa, log_scale) with value_i = mantissa_i * exp(log_scale_i);
    the running window is renormalized whenever it exceeds RENORM_LIMIT.
    """
    lam = complex(lam)
    _require_regular(params, lam)
    sec = truncate(params, n)
    d = sec.diag - lam
    mant = np.zeros(n, dtype=complex)
    logs = np.zeros(n)
    log = 0.0
    y1 = y2 = 0j  # y_{i-1}, y_{i-2} in the current scale
    for i in range(n):
        acc = 1.0 + 0j if i == 0 else 0j
        if i >= 1:
            acc -= sec.sub1[i - 1] * y1
        if i >= 2:
            acc -= sec.sub2[i - 2] * y2
        y = acc / d[i]
        size = abs(y)
        if size > RENORM_LIMIT:
            y, y1 = y / size, y1 / size
            log += math.log(size)
        mant[i] = y
        logs[i] = log
        y2, y1 = y1, y
    return mant, logs


def _logsumexp(v: np.ndarray) -> float:
    v = v[np.isfinite(v)]
    if v.size == 0:
        return -math.inf
    m = float(np.max(v))
    return m + math.log(float(np.sum(np.exp(v - m))))


def membership_oracle(params: OperatorParams, space, lam: complex, n: int = 400,
                      band: float = DEFAULT_BAND) -> OracleVerdict:
    """Decide membership from growth of the partial sums of |a_k|^p.

    S_n / S_{n/2} > 1 + band means the first inverse column is not in l_p
    (InSpectrum); a ratio below 1 + band/10 means it has converged.
    """
    space = as_space(space)
    lam = complex(lam)
    mant, logs = first_column_logscaled(params, lam, n)
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(mant)) + logs
    p = space.p
    half = n // 2
    log_s_full = _logsumexp(p * logabs)
    log_s_half = _logsumexp(p * logabs[:half])
    growth = log_s_full - log_s_half
    if growth > math.log1p(band):
        verdict = Numeric.IN_SPECTRUM
    elif growth < math.log1p(band / 10.0):
        verdict = Numeric.RESOLVENT
    else:
        verdict = Numeric.INCONCLUSIVE
    m = n - n % 2
    pair_logs = logs[:m].reshape(-1, 2)
    pairs = mant[:m].reshape(-1, 2).copy()
    # the two entries of a pair may straddle a renormalization
    pairs[:, 0] *= np.exp(pair_logs[:, 0] - pair_logs[:, 1])
    seq = PairSequence(pairs, Origin.INVERSE_A, pair_logs[:, 1])
    try:
        rate = decay_rate(seq)
    except ValueError:
        rate = 0.0
    return OracleVerdict(lam, in_spectrum(params, space, lam), verdict, rate, n)


def row_reduce(m: np.ndarray, rtol: float = PIVOT_RTOL,
               thresh: float | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with partial pivoting.

    Pivots smaller than ``rtol`` times the largest initial row norm (or the
    absolute ``thresh`` when given) count as zero.  Returns (rref, pivots).
    """
    a = np.array(m, dtype=complex)
    rows, cols = a.shape
    if thresh is None:
        norms = np.linalg.norm(a, axis=1) if rows else np.zeros(0)
        thresh = rtol * (float(norms.max()) if norms.size else 0.0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        k = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[k, c]) <= thresh:
            a[r:, c] = 0
            continue
        a[[r, k]] = a[[k, r]]
        a[r] /= a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] -= a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(m: np.ndarray, rtol: float = PIVOT_RTOL) -> np.ndarray:
    """Columns spanning the nullspace, read off the reduced echelon form."""
    rref, pivots = row_reduce(m, rtol)
    cols = m.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=complex)
    for j, fc in enumerate(free):
        basis[fc, j] = 1.0
        for i, pc in enumerate(pivots):
            basis[pc, j] = -rref[i, fc]
    return basis


def kernel_rank_check(params: OperatorParams, lam: complex, n: int = 8) -> int:
    """Dimension of the eigenvector space of B at lam in {r1, r2} seen by an n-section.

    The n x n section of B - lam I has at most n - 1 informative rows, so its
    own nullspace is never trivial; what the section does decide is the leading
    n - 4 coordinates.  The returned value is the rank of the section's
    nullspace restricted to those coordinates, which is 0 exactly when every
    finite-section solution vanishes there.
    """
    lam = complex(lam)
    if lam != params.r1 and lam != params.r2:
        raise ValueError("kernel_rank_check is only meaningful at lambda = r1 or r2")
    if n < 6 or n % 2:
        raise ValueError("n must be even and at least 6")
    m = truncate(params, n).toarray() - lam * np.eye(n)
    basis = nullspace(m)
    if basis.shape[1] == 0:
        return 0
    # threshold relative to the whole basis: roundoff in the leading block is not rank
    thresh = PIVOT_RTOL * float(np.max(np.linalg.norm(basis, axis=0)))
    _, piv = row_reduce(basis[: n - 4, :].T, thresh=thresh)
    return len(piv)


def empirical_norm(params: OperatorParams, space, n: int = 64, trials: int = 100,
                   seed: int = 0, power_steps: int = 30) -> float:
    """Lower estimate of ||B||_p from explicit vectors supported on n coordinates.

    p = 1 gives the exact maximal column sum.  For p > 1 the estimate is the
    best ratio ||Bx||_p / ||x||_p over basis vectors, random complex vectors
    and a few p-norm power iterations started from the best random vector.
    """
    space = as_space(space)
    if n < 8 or trials < 1:
        raise ValueError("need n >= 8 and trials >= 1")
    sec = truncate(params, n + 2).toarray()[:, :n]
    if space.is_l1:
        return float(np.max(np.sum(np.abs(sec), axis=0)))
    p, q = space.p, space.q

    def ratio(x):
        return float(np.linalg.norm(apply(params, x), p) / np.linalg.norm(x, p))

    best = max(ratio(np.eye(n, dtype=complex)[k]) for k in range(min(n, 4)))
    rng = np.random.default_rng(seed)
    start, start_val = None, -1.0
    for _ in range(trials):
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        v = ratio(x)
        if v > start_val:
            start, start_val = x, v
    best = max(best, start_val)

    def dual(z, e):
        mag = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ph = np.where(mag > 0, z / np.where(mag > 0, mag, 1), 0)
        return mag ** (e - 1) * ph

    x = start / np.linalg.norm(start, p)
    for _ in range(power_steps):
        y = sec @ x
        z = sec.conj().T @ dual(y, p)
        x_new = dual(z, q)
        nrm = np.linalg.norm(x_new, p)
        if nrm == 0 or not np.isfinite(nrm):
            break
        x = x_new / nrm
        best = max(best, ratio(x))
    return best
