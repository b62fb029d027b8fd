"""Spectrum membership and fine-spectrum classification at a point lambda.

Everything is driven by the quadratic

    f(a) = a^2 + (t1/(r1-l) + t2/(r2-l) - s1 s2/((r1-l)(r2-l))) a
               + t1 t2/((r1-l)(r2-l))

whose roots are the eigenvalues of the companion matrix advancing the
columns of (B - l I)^{-1}.  A point l lies in the spectrum exactly when the
dominant root has modulus >= 1, i.e. when the membership ratio
1/|alpha_1| is <= 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .operator import OperatorParams, as_space

DEFAULT_TOL = 1e-9
JORDAN_RTOL = 1e-12


def principal_sqrt(z: complex) -> complex:
    """Square root with Re >= 0, taking Im >= 0 when the real part vanishes."""
    w = cmath.sqrt(complex(z))
    if w.real == 0 and w.imag < 0:
        w = -w
    return complex(w.real + 0.0, w.imag)


def principal_sqrt_array(z: np.ndarray) -> np.ndarray:
    w = np.sqrt(np.asarray(z, dtype=complex))
    flip = (w.real == 0) & (w.imag < 0)
    return np.where(flip, -w, w)


def chi(params: OperatorParams, lam: complex) -> complex:
    r1, r2, s1, s2, t1, t2 = params.bands()
    u, v = r1 - lam, r2 - lam
    ss = s1 * s2
    return (t1 ** 2 * v ** 2 + t2 ** 2 * u ** 2 + ss ** 2 - 2 * t1 * t2 * u * v
            - 2 * ss * t1 * v - 2 * ss * t2 * u)


def _linear_coeff(params: OperatorParams, lam):
    """D = s1 s2 - t1 (r2 - l) - t2 (r1 - l)."""
    return params.s1 * params.s2 - params.t1 * (params.r2 - lam) - params.t2 * (params.r1 - lam)


def _jordan_scale(params: OperatorParams, lam) -> float:
    ss = params.s1 * params.s2
    return 1.0 + abs(ss) ** 2 + abs(params.t1 * (params.r2 - lam)) ** 2 + abs(params.t2 * (params.r1 - lam)) ** 2


def _dominant_sqrt(d: complex, c: complex) -> complex:
    """Return sigma*sqrt(chi) with sigma = +-1 chosen so |d + sigma sqrt| is maximal.

    Ties keep the principal (+) sign.
    """
    w = principal_sqrt(c)
    if abs(d - w) > abs(d + w):
        return -w
    return w


@dataclass(frozen=True)
class CharRoots:
    """Roots of f ordered so |alpha1| >= |alpha2|.

    ``alpha1``/``alpha2`` are None when lambda is r1 or r2 (the quadratic is
    undefined there).  ``plus_branch`` tells whether alpha1 came from the
    +sqrt(chi) formula under the principal branch.
    """

    alpha1: complex | None
    alpha2: complex | None
    chi: complex
    discriminant_zero: bool
    degenerate_lambda: bool
    plus_branch: bool = True

    @property
    def beta1(self) -> complex | None:
        return None if not self.alpha1 else 1.0 / self.alpha1

    @property
    def beta2(self) -> complex | None:
        return None if not self.alpha2 else 1.0 / self.alpha2


def char_roots(params: OperatorParams, lam: complex) -> CharRoots:
    lam = complex(lam)
    c = chi(params, lam)
    jordan = abs(c) <= JORDAN_RTOL * _jordan_scale(params, lam)
    if lam == params.r1 or lam == params.r2:
        return CharRoots(None, None, c, jordan, True)
    d = _linear_coeff(params, lam)
    den = 2 * (params.r1 - lam) * (params.r2 - lam)
    w = _dominant_sqrt(d, c)
    plus = w == principal_sqrt(c)
    return CharRoots((d + w) / den, (d - w) / den, c, jordan, False, plus)


def membership_ratio(params: OperatorParams, lam: complex) -> float:
    """|2 (r1-l)(r2-l) / (D + sqrt(chi))| with the square-root sign taken on the
    dominant side; equals 1/|alpha1|.  Zero at l in {r1, r2}."""
    lam = complex(lam)
    if lam == params.r1 or lam == params.r2:
        return 0.0
    num = abs(2 * (params.r1 - lam) * (params.r2 - lam))
    d = _linear_coeff(params, lam)
    den = abs(d + _dominant_sqrt(d, chi(params, lam)))
    if den == 0:
        return math.inf
    return num / den


def principal_branch_ratio(params: OperatorParams, lam: complex) -> float:
    """The literal quotient with +sqrt(chi) on the principal branch.

    Agrees with :func:`membership_ratio` whenever Re(conj(D) sqrt(chi)) >= 0.
    """
    lam = complex(lam)
    if lam == params.r1 or lam == params.r2:
        return 0.0
    num = abs(2 * (params.r1 - lam) * (params.r2 - lam))
    den = abs(_linear_coeff(params, lam) + principal_sqrt(chi(params, lam)))
    return math.inf if den == 0 else num / den


def membership_ratio_array(params: OperatorParams, lam: np.ndarray) -> np.ndarray:
    """Vectorised :func:`membership_ratio` over an array of lambdas."""
    lam = np.asarray(lam, dtype=complex)
    r1, r2, s1, s2, t1, t2 = params.bands()
    u, v = r1 - lam, r2 - lam
    ss = s1 * s2
    c = t1 ** 2 * v ** 2 + t2 ** 2 * u ** 2 + ss ** 2 - 2 * t1 * t2 * u * v - 2 * ss * t1 * v - 2 * ss * t2 * u
    d = ss - t1 * v - t2 * u
    w = principal_sqrt_array(c)
    den = np.maximum(np.abs(d + w), np.abs(d - w))
    num = np.abs(2 * u * v)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den == 0, np.inf, num / np.where(den == 0, 1.0, den))
    out = np.where((lam == r1) | (lam == r2), 0.0, out)
    return out


def in_spectrum(params: OperatorParams, space, lam: complex) -> bool:
    """Spectrum membership; the set is the same for every 1 <= p < inf."""
    as_space(space)
    return membership_ratio(params, lam) <= 1.0


class Fine(str, Enum):
    RESOLVENT = "Resolvent"
    RESIDUAL = "Residual"
    CONTINUOUS = "Continuous"


class Flag(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "UnknownPerPaper"


GOLDBERG_LABELS = ("A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3")


@dataclass(frozen=True)
class GoldbergState:
    """A Goldberg label, or an unresolved candidate set."""

    label: str | None
    candidates: tuple[str, ...] = field(default=())

    @property
    def resolved(self) -> bool:
        return self.label is not None

    def __str__(self) -> str:
        if self.label is not None:
            return self.label
        return "Unresolved(" + ",".join(self.candidates) + ")"


@dataclass(frozen=True)
class SpectralClassification:
    lam: complex
    ratio: float
    in_spectrum: bool
    fine: Fine
    goldberg: GoldbergState
    in_ap: Flag
    in_delta: Flag
    in_co: Flag
    boundary_flag: bool
    p: float
    tol: float

    def to_dict(self) -> dict:
        ratio = self.ratio if math.isfinite(self.ratio) else "inf"
        return {
            "lambda": {"re": self.lam.real, "im": self.lam.imag},
            "ratio": ratio,
            "in_spectrum": self.in_spectrum,
            "fine": self.fine.value,
            "goldberg": str(self.goldberg),
            "ap": self.in_ap.value,
            "delta": self.in_delta.value,
            "co": self.in_co.value,
            "boundary": self.boundary_flag,
            "p": self.p,
            "tol": self.tol,
        }


def _region(ratio: float, tol: float) -> str:
    """'out', 'boundary' or 'in' relative to the unit level of the ratio."""
    if ratio > 1.0 + tol:
        return "out"
    if ratio < 1.0 - tol:
        return "in"
    return "boundary"


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError("tol must be positive")


def _is_r(params: OperatorParams, lam: complex) -> bool:
    return lam == params.r1 or lam == params.r2


def goldberg_classify(params: OperatorParams, space, lam: complex, tol: float = DEFAULT_TOL) -> GoldbergState:
    _check_tol(tol)
    space = as_space(space)
    lam = complex(lam)
    if _is_r(params, lam):
        return GoldbergState(None, ("C1", "C2"))
    where = _region(membership_ratio(params, lam), tol)
    if where == "out":
        return GoldbergState("A1")
    if where == "boundary" and not space.is_l1:
        return GoldbergState("B2")
    return GoldbergState("C2")


def subdivision_flags(params: OperatorParams, space, lam: complex,
                      tol: float = DEFAULT_TOL) -> tuple[Flag, Flag, Flag]:
    """(in sigma_ap, in sigma_delta, in sigma_co)."""
    _check_tol(tol)
    space = as_space(space)
    lam = complex(lam)
    where = _region(membership_ratio(params, lam), tol)
    if where == "out":
        return Flag.NO, Flag.NO, Flag.NO
    delta = Flag.YES
    if space.is_l1:
        co = Flag.YES
    else:
        co = Flag.YES if where == "in" else Flag.NO
    ap = Flag.UNKNOWN if _is_r(params, lam) else Flag.YES
    return ap, delta, co


def adjoint_point_spectrum_contains(params: OperatorParams, space, lam: complex,
                                    tol: float = DEFAULT_TOL) -> bool:
    """Whether lam is an eigenvalue of the adjoint acting on l_q."""
    space = as_space(space)
    where = _region(membership_ratio(params, lam), tol)
    if space.is_l1:
        return where != "out"
    return where == "in"


def fine_classify(params: OperatorParams, space, lam: complex, tol: float = DEFAULT_TOL) -> SpectralClassification:
    _check_tol(tol)
    space = as_space(space)
    lam = complex(lam)
    ratio = membership_ratio(params, lam)
    where = _region(ratio, tol)
    if where == "out":
        fine = Fine.RESOLVENT
    elif where == "in" or space.is_l1:
        fine = Fine.RESIDUAL
    else:
        fine = Fine.CONTINUOUS
    ap, delta, co = subdivision_flags(params, space, lam, tol)
    return SpectralClassification(
        lam=lam,
        ratio=ratio,
        in_spectrum=fine is not Fine.RESOLVENT,
        fine=fine,
        goldberg=goldberg_classify(params, space, lam, tol),
        in_ap=ap,
        in_delta=delta,
        in_co=co,
        boundary_flag=abs(ratio - 1.0) <= tol,
        p=space.p,
        tol=tol,
    )
