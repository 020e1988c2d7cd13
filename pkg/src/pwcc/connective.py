"""Chain integrals V_k, connective-constant bounds and uniqueness thresholds.

``V_k`` integrates, over chains ``v_0, ..., v_k`` started at the origin, the
product of Mayer weights of consecutive steps times the damping that earlier
points ``v_i`` exert on a later point ``v_j`` when ``v_j`` lands closer to
``v_i`` than ``v_{i+1}`` did. By translation invariance the starting point
does not matter, so the sup over ``v_0`` is the value at the origin.

The Monte Carlo estimator draws every step from the normalised Mayer density,
so one chain contributes ``C_phi**k`` times its damping factor. For hard
cores that factor is 0 or 1 and the scheme is plain rejection of chains that
step into a forbidden ball.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, stats

from ._blocks import BLOCK_SIZE, block_rng, block_sizes, map_blocks, merge_moments
from .errors import DimensionMismatch, EmptyInput, InvalidK, KindNormMismatch, QuadratureFailure
from .geometry import Norm, Space
from .potentials import HardSphere, Potential, Strauss

#: 1/2 + 3*sqrt(3)/(8*pi): V_2 / v_{2,r}^2 for hard disks
HARD_DISK_V2_RATIO = 0.5 + 3.0 * math.sqrt(3.0) / (8.0 * math.pi)
DEFAULT_CONFIDENCE = 0.99


class Method(str, enum.Enum):
    MONTE_CARLO = "MonteCarlo"
    EXACT_LENS = "ExactLens"
    EXACT_STRAUSS = "ExactStrauss"
    CLOSED_FORM_BOUND = "ClosedFormBound"


@dataclass(frozen=True)
class VkEstimate:
    k: int
    mean: float
    std_error: float
    n_samples: int
    seed: int | None
    method: Method
    c_phi: float
    wall_seconds: float = field(default=0.0, compare=False)

    @property
    def exact(self) -> bool:
        # V_1 = C_phi: the chain estimator is constant, hence exact
        return self.method is not Method.MONTE_CARLO or self.k == 1

    @property
    def root(self) -> float:
        """``mean ** (1/k)``, the implied bound on the connective constant."""
        return self.mean ** (1.0 / self.k)

    @property
    def root_std_error(self) -> float:
        if self.mean <= 0:
            return math.inf if self.std_error > 0 else 0.0
        return self.mean ** (1.0 / self.k - 1.0) * self.std_error / self.k

    def to_dict(self) -> dict:
        out = asdict(self)
        out["method"] = self.method.value
        out["delta_root"] = self.root
        out["delta_root_std_error"] = self.root_std_error
        out["exact"] = self.exact
        return out


@dataclass(frozen=True)
class DeltaBound:
    value: float
    k_used: int
    confidence: float
    rigorous: bool
    c_phi: float

    @property
    def ratio(self) -> float:
        return self.value / self.c_phi


@dataclass(frozen=True)
class Threshold:
    value: float
    rigorous: bool
    c_phi: float

    @property
    def times_c_phi(self) -> float:
        """The threshold in units of ``1 / C_phi`` (``e`` for the trivial bound)."""
        return self.value * self.c_phi


@dataclass(frozen=True)
class V2Bound:
    v2: float
    delta: float
    c_phi: float


def _as_points(space: Space, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != space.dimension:
        raise DimensionMismatch(
            f"expected a tuple of points of length {space.dimension}, got shape {pts.shape}")
    return pts


def damping_weitz(p: Potential, space: Space, points) -> float:
    """Damping of the last point of ``points`` by all but its immediate predecessor.

    Equal to 1 for tuples of length 1 or 2.
    """
    pts = _as_points(space, points)
    k = len(pts) - 1
    out = 1.0
    for i in range(k - 1):
        dist = space.distance(pts[k], pts[i])
        if dist < space.distance(pts[i + 1], pts[i]):
            out *= p.boltzmann(dist)
    return out


def chain_weight(p: Potential, space: Space, points) -> float:
    """The V_k integrand at the chain ``points = (v_0, ..., v_k)``."""
    pts = _as_points(space, points)
    if len(pts) < 2:
        raise ValueError("a chain needs at least two points")
    steps = [space.distance(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    weight = 1.0
    for j in range(1, len(pts)):
        damp = 1.0
        for i in range(j - 1):
            dist = space.distance(pts[j], pts[i])
            if dist < steps[i]:
                damp *= p.boltzmann(dist)
        weight *= damp * p.mayer(steps[j - 1])
        if weight == 0.0:
            return 0.0
    return weight


def _survival_block(p: Potential, space: Space, k: int, size: int, seed: int, block: int):
    """Moments of the damping factor over ``size`` Mayer-step chains of length ``k``."""
    rng = block_rng(seed, block)
    d = space.dimension
    pos = np.zeros((size, k + 1, d))
    step = np.zeros((size, k))
    weight = np.ones(size)
    alive = np.arange(size)
    for j in range(1, k + 1):
        if alive.size == 0:
            break
        new = pos[alive, j - 1] + p.sample_displacement(space, rng, alive.size)
        step[alive, j - 1] = space.norm_of(new - pos[alive, j - 1])
        if j >= 2:
            dist = space.norm_of(pos[alive, : j - 1] - new[:, None, :])
            damp = np.where(dist < step[alive, : j - 1], p.boltzmann(dist), 1.0)
            weight[alive] *= damp.prod(axis=1)
            keep = weight[alive] > 0.0
            alive, new = alive[keep], new[keep]
        pos[alive, j] = new
    mean = weight.mean()
    return size, mean, float(((weight - mean) ** 2).sum())


def estimate_vk(p: Potential, space: Space, k: int, n_samples: int, seed: int,
                workers: int = 1) -> VkEstimate:
    """Monte Carlo estimate of ``V_k`` from ``n_samples`` chains.

    The result depends only on ``(seed, n_samples)``; ``workers`` changes
    wall time, not numbers.
    """
    if int(k) != k or k < 1:
        raise InvalidK(f"k must be a positive integer, got {k!r}")
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    k, n_samples = int(k), int(n_samples)
    t0 = time.perf_counter()
    c_phi = p.temperedness_constant(space)
    sizes = block_sizes(n_samples, BLOCK_SIZE)
    parts = map_blocks(_survival_block,
                       [(p, space, k, size, seed, b) for b, size in enumerate(sizes)], workers)
    n, mean, m2 = merge_moments(parts)
    scale = c_phi ** k
    sd = math.sqrt(m2 / (n - 1)) if n > 1 else 0.0
    return VkEstimate(k=k, mean=float(scale * mean), std_error=float(scale * sd / math.sqrt(n)),
                      n_samples=n, seed=seed, method=Method.MONTE_CARLO, c_phi=c_phi,
                      wall_seconds=time.perf_counter() - t0)


def _lens_excluded_area(s: float) -> float:
    """Area of the unit disk within ``s`` of a point at distance ``s`` from its centre."""
    if s <= 0.5:
        return math.pi * s * s
    return (s * s * math.acos(1.0 - 1.0 / (2.0 * s * s)) + math.acos(1.0 / (2.0 * s))
            - 0.5 * math.sqrt((2.0 * s - 1.0) * (2.0 * s + 1.0)))


def v2_hard_disk_quadrature(r: float) -> float:
    """Hard-disk ``V_2`` rebuilt from the radial integral over the first step length."""
    inner, _ = integrate.quad(lambda s: s * (1.0 - s * s), 0.0, 0.5, epsabs=0.0, epsrel=1e-13)
    outer, _ = integrate.quad(lambda s: s * (math.pi - _lens_excluded_area(s)), 0.5, 1.0,
                              epsabs=0.0, epsrel=1e-13, limit=200)
    return (2.0 * math.pi ** 2 * inner + 2.0 * math.pi * outer) * r ** 4


def exact_v2_hard_disk(r: float, rtol: float = 1e-9) -> float:
    """``v_{2,r}^2 (1/2 + 3 sqrt(3) / (8 pi))``, cross-checked against the radial quadrature."""
    if not r > 0:
        raise ValueError("r must be positive")
    closed = (math.pi * r * r) ** 2 * HARD_DISK_V2_RATIO
    quad = v2_hard_disk_quadrature(r)
    if abs(quad - closed) > rtol * closed:
        raise QuadratureFailure(f"closed form {closed!r} and quadrature {quad!r} disagree")
    return closed


def exact_v2_strauss(r: float, a: float) -> float:
    """Exact ``V_2`` for the planar Strauss potential ``a * 1{s <= r}``."""
    if not (r > 0 and a > 0):
        raise ValueError("r and a must be positive")
    c_phi = -math.expm1(-a) * math.pi * r * r
    bracket = HARD_DISK_V2_RATIO + math.exp(-a) * (1.0 - HARD_DISK_V2_RATIO)
    return c_phi * c_phi * bracket


def v2_bound_dim_d(p: Potential, space: Space) -> V2Bound:
    """Analytic upper bound on ``V_2`` for hard spheres / hard cubes with ``d >= 2``.

    Also returns the implied bound ``(1 - 8**-(d+1)) C_phi`` on the connective constant.
    """
    if not isinstance(p, HardSphere):
        raise KindNormMismatch(f"bound applies to hard spheres and cubes, not {p.kind}")
    if p.natural_norm != space.norm:
        raise KindNormMismatch(f"{p.kind} requires the {p.natural_norm.value} norm")
    d = space.dimension
    if d < 2:
        raise ValueError("bound requires d >= 2")
    c_phi = p.temperedness_constant(space)
    return V2Bound(v2=c_phi ** 2 * (1.0 - 8.0 ** -d + 16.0 ** -d),
                   delta=(1.0 - 8.0 ** -(d + 1)) * c_phi, c_phi=c_phi)


def exact_v2(p: Potential, space: Space) -> VkEstimate:
    """Exact ``V_2`` as an estimate record, for the cases with a closed form (planar, L2)."""
    if space.dimension != 2 or space.norm is not Norm.L2 or type(p) not in (HardSphere, Strauss):
        raise NotImplementedError(f"no closed form for V_2 of {p!r} on {space!r}")
    c_phi = p.temperedness_constant(space)
    if isinstance(p, Strauss):
        value, method = exact_v2_strauss(p.r, p.a), Method.EXACT_STRAUSS
    else:
        value, method = exact_v2_hard_disk(p.r), Method.EXACT_LENS
    return VkEstimate(k=2, mean=value, std_error=0.0, n_samples=0, seed=None,
                      method=method, c_phi=c_phi)


def v2_bound_estimate(p: Potential, space: Space) -> VkEstimate:
    """The analytic ``V_2`` bound wrapped as an (upper-bound) estimate record."""
    b = v2_bound_dim_d(p, space)
    return VkEstimate(k=2, mean=b.v2, std_error=0.0, n_samples=0, seed=None,
                      method=Method.CLOSED_FORM_BOUND, c_phi=b.c_phi)


def delta_bound(estimates, confidence: float = DEFAULT_CONFIDENCE) -> DeltaBound:
    """Upper bound on the connective constant from finitely many ``V_k`` estimates.

    Each estimate is inflated to its one-sided ``confidence`` upper limit before
    taking the ``k``-th root; the smallest root wins, capped at ``C_phi``. The
    bound is rigorous when the winning estimate is exact (or the cap applies).
    """
    estimates = list(estimates)
    if not estimates:
        raise EmptyInput("need at least one V_k estimate")
    c_phi = estimates[0].c_phi
    if any(not math.isclose(e.c_phi, c_phi, rel_tol=1e-12) for e in estimates):
        raise ValueError("estimates come from different potentials or spaces")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = stats.norm.ppf(confidence)
    best, best_k, best_exact = c_phi, 1, True
    for e in estimates:
        upper = (e.mean + (0.0 if e.exact else z * e.std_error)) ** (1.0 / e.k)
        if upper < best:
            best, best_k, best_exact = upper, e.k, e.exact
    return DeltaBound(value=best, k_used=best_k, confidence=confidence,
                      rigorous=best_exact, c_phi=c_phi)


def uniqueness_threshold(db: DeltaBound) -> Threshold:
    """Activity ``e / Delta`` below which the Gibbs measure is unique."""
    if not db.value > 0:
        raise ValueError("connective-constant bound must be positive")
    return Threshold(value=math.e / db.value, rigorous=db.rigorous, c_phi=db.c_phi)
