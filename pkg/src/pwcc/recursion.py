"""The homogeneous scalar tree recursion ``F(lam, z) = lam * exp(-z * C_phi)``.

On a homogeneous space every vertex of the recursion tree sees the same
integral of the Mayer weight, so the recursion collapses to iterating ``F``.
Below ``alpha = lam * C_phi = e`` the iteration has a single attracting fixed
point; above it a two-cycle appears. Two-cycles are found through the
rescaled map ``f_alpha(y) = exp(-alpha * exp(-alpha * y)) - y`` with
``y = z / lam``, whose roots are the fixed points of ``F o F``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketFailure

CRITICAL_BAND = 1e-9
MAX_BISECT = 200
SCAN_STEP = 1e-4


class Classification(str, enum.Enum):
    UNIQUE = "Unique"
    NON_UNIQUE = "NonUnique"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class ScalarRecursion:
    lam: float
    c_phi: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError("lambda must be non-negative")
        if not self.c_phi > 0:
            raise ValueError("C_phi must be positive")

    @property
    def alpha(self) -> float:
        return self.lam * self.c_phi


@dataclass(frozen=True)
class FixedPointReport:
    lam: float
    c_phi: float
    z_star: float
    cycle: tuple | None
    classification: Classification
    residuals: dict = field(default_factory=dict)
    extra_sign_changes: tuple = ()

    @property
    def alpha(self) -> float:
        return self.lam * self.c_phi

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "c_phi": self.c_phi, "alpha": self.alpha,
                "z_star": self.z_star, "cycle": list(self.cycle) if self.cycle else None,
                "classification": self.classification.value, "residuals": dict(self.residuals),
                "extra_sign_changes": list(self.extra_sign_changes), "exact": True}


def scalar_map(rec: ScalarRecursion, z):
    return rec.lam * np.exp(-np.asarray(z, dtype=float) * rec.c_phi) if np.ndim(z) \
        else rec.lam * math.exp(-z * rec.c_phi)


def _bisect(f, lo: float, hi: float) -> float:
    """Root of ``f`` on ``[lo, hi]`` given opposite signs at the ends, to machine precision."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    if f(hi) == 0.0:
        return hi
    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fixed_point(rec: ScalarRecursion, tol: float = 1e-12) -> float:
    """The unique non-negative root of ``z - F(z)``, found by bisection on ``[0, lam]``.

    The result is checked against the Lambert-W characterisation
    ``z C e^{z C} = alpha``.
    """
    if rec.lam == 0:
        return 0.0
    z = _bisect(lambda t: t - scalar_map(rec, t), 0.0, rec.lam)
    resid = abs(scalar_map(rec, z) - z)
    if resid > max(tol, 8 * np.spacing(z)):
        raise ArithmeticError(f"fixed-point residual {resid:.3g} exceeds {tol:.3g}")
    w = z * rec.c_phi
    if abs(w * math.exp(w) - rec.alpha) > 1e-10 * rec.alpha:
        raise ArithmeticError("fixed point fails the Lambert-W identity")
    return z


def f_alpha(alpha: float, y):
    return np.exp(-alpha * np.exp(-alpha * np.asarray(y, dtype=float))) - y


def _sign_changes(alpha: float, step: float = SCAN_STEP):
    y = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    s = np.sign(f_alpha(alpha, y))
    idx = np.nonzero(s[:-1] * s[1:] <= 0)[0]
    # a zero sample shows up on both sides: count it once
    idx = idx[np.r_[True, np.diff(idx) > 1]] if idx.size else idx
    return y[idx]


def _root_tol(alpha: float, y: float) -> float:
    # near alpha = e the three roots merge and f_alpha' -> 0 there: rounding in
    # f_alpha then moves a root by about eps / |f_alpha'|
    inner = math.exp(-alpha * y)
    slope = abs(alpha * alpha * inner * math.exp(-alpha * inner) - 1.0)
    return 1e-14 / max(slope, 1e-300)


def two_cycle(rec: ScalarRecursion, tol: float = 1e-12):
    """The two-cycle ``(z1, z2)`` with ``z1 < z*  < z2`` when ``alpha > e``, else ``None``.

    Raises :class:`BracketFailure` if the expected sign changes of ``f_alpha``
    cannot be established.
    """
    alpha = rec.alpha
    if alpha <= math.e + CRITICAL_BAND:
        return None
    cycle, _ = _two_cycle(rec, tol)
    return cycle


def _two_cycle(rec: ScalarRecursion, tol: float):
    alpha, lam = rec.alpha, rec.lam
    f = lambda y: float(f_alpha(alpha, y))
    y_mid = fixed_point(rec) / lam
    lo_b, hi_b = 1.0 / alpha, 1.0 / math.e
    # f(0) > 0 > f(1) always hold, but underflow to 0 for alpha beyond ~745
    if f(0.0) >= 0 > f(lo_b) and f(hi_b) > 0 >= f(1.0):
        y1, y2 = _bisect(f, 0.0, lo_b), _bisect(f, hi_b, 1.0)
        y_check = _bisect(f, lo_b, hi_b)
        if abs(y_check - y_mid) > max(tol, _root_tol(alpha, y_mid)):
            raise BracketFailure(f"middle root {y_check!r} differs from fixed point {y_mid!r}")
    else:
        # near criticality the proof's bracket values are swamped by rounding;
        # bracket the outer roots by stepping away from the (known) middle root
        eta = max(4 * np.spacing(y_mid), 1e-15)
        while not (f(y_mid - eta) < 0 < f(y_mid + eta)):
            eta *= 2.0
            if eta > min(y_mid, 1.0 - y_mid):
                raise BracketFailure(f"no sign change of f_alpha around the fixed point (alpha={alpha!r})")
        y1, y2 = _bisect(f, 0.0, y_mid - eta), _bisect(f, y_mid + eta, 1.0)
    z1 = lam * y1
    z2 = scalar_map(rec, z1)
    resid = abs(scalar_map(rec, z2) - z1)
    if abs(z2 - lam * y2) > lam * max(tol, _root_tol(alpha, y2)) or resid > max(tol, 64 * np.spacing(lam)):
        raise BracketFailure("bisected roots do not form a two-cycle")
    if abs(z2 - z1) <= 10 * tol:
        raise BracketFailure("two-cycle is not resolved from the fixed point at this tolerance")
    extra = _sign_changes(alpha)
    if extra.size > 3:
        warnings.warn(f"f_alpha has {extra.size} sign changes on [0, 1] at alpha={alpha!r}",
                      RuntimeWarning, stacklevel=3)
    else:
        extra = np.array([])
    return (z1, z2), tuple(extra.tolist())


def classify(rec: ScalarRecursion, tol: float = 1e-12) -> FixedPointReport:
    z = fixed_point(rec, tol)
    residuals = {"fixed_point": abs(scalar_map(rec, z) - z)}
    if rec.lam > 0:
        w = z * rec.c_phi
        residuals["lambert_w"] = abs(w * math.exp(w) - rec.alpha) / rec.alpha
    cycle, extra = None, ()
    if abs(rec.alpha - math.e) <= CRITICAL_BAND:
        cls = Classification.CRITICAL
    elif rec.alpha < math.e:
        cls = Classification.UNIQUE
    else:
        cycle, extra = _two_cycle(rec, tol)
        cls = Classification.NON_UNIQUE
        residuals["cycle"] = max(abs(scalar_map(rec, cycle[0]) - cycle[1]),
                                 abs(scalar_map(rec, cycle[1]) - cycle[0]))
    return FixedPointReport(rec.lam, rec.c_phi, z, cycle, cls, residuals, extra)


def depth_k_iterate(rec: ScalarRecursion, tau: float, k: int) -> float:
    """Root value of the depth-``k`` recursion with constant boundary value ``tau``."""
    if k < 0:
        raise ValueError("depth must be non-negative")
    pi = float(tau)
    for _ in range(k):
        pi = scalar_map(rec, pi)
    return pi


def contraction_check(rec: ScalarRecursion, tau1: float, tau2: float, k: int):
    """Compare the square-root distance after ``k`` levels with ``(lam/e)^k C^k |tau1 - tau2|``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    lhs = (math.sqrt(depth_k_iterate(rec, tau1, k)) - math.sqrt(depth_k_iterate(rec, tau2, k))) ** 2
    rhs = (rec.lam / math.e) ** k * rec.c_phi ** k * abs(tau1 - tau2)
    return lhs, rhs, lhs <= rhs * (1 + 1e-9)


def bifurcation(alphas, c_phi: float = 1.0):
    """Rows ``(alpha, z*, z1, z2, classification)`` over a sweep in ``alpha``."""
    rows = []
    for a in alphas:
        rep = classify(ScalarRecursion(float(a) / c_phi, c_phi))
        z1, z2 = rep.cycle if rep.cycle else (math.nan, math.nan)
        rows.append((float(a), rep.z_star, z1, z2, rep.classification.value))
    return rows
