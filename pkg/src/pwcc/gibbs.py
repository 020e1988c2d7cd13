"""Exact finite-volume Gibbs sampling and empirical checks of density identities.

For a repulsive potential the finite-volume Gibbs measure has density
``exp(-H) <= 1`` with respect to the Poisson process of intensity ``lam``, so
drawing Poisson configurations and accepting each with probability
``exp(-H)`` produces exact, independent samples. Every estimator below is a
plain average over such a batch.

A batch is stored as a padded array ``points[m, i, :]`` with ``counts[m]``
valid rows per configuration. Estimators use the flattened list of all
points and reduce per configuration with segment sums.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special

from ._blocks import block_rng, map_blocks
from .errors import AcceptanceTooLow, DegenerateWeights, EmptyBatch, ZeroAcceptance
from .geometry import Norm, Space
from .potentials import Potential

#: proposals per deterministic block
PROPOSAL_BLOCK = 2 ** 12
MAX_MEAN_POINTS = 200.0
MIN_ACCEPTANCE = 1e-6
ACCEPTANCE_PROBE = 10 ** 7
#: cap on (configs x padded points^2) per pair-energy chunk
_PAIR_CHUNK = 2 ** 22


class Boundary(str, enum.Enum):
    FREE = "free"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class BoxRegion:
    """The box ``[0, L_1] x ... x [0, L_d]``."""

    sides: tuple
    boundary: Boundary = Boundary.FREE
    norm: Norm = Norm.L2

    def __post_init__(self):
        sides = tuple(float(s) for s in np.atleast_1d(self.sides))
        if not sides or any(not s > 0 for s in sides):
            raise ValueError("box sides must be positive")
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "norm", Norm(self.norm))

    @property
    def dimension(self) -> int:
        return len(self.sides)

    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))

    @property
    def space(self) -> Space:
        return Space(self.dimension, self.norm)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x >= 0) & (x <= np.asarray(self.sides))))

    def check_potential(self, p: Potential):
        if self.boundary is Boundary.PERIODIC and min(self.sides) < 2 * p.cutoff:
            raise ValueError("periodic box needs every side >= 2 * cutoff for the minimum image")

    def separation(self, x, y):
        """Distance along the last axis, using the minimum image when periodic."""
        diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        if self.boundary is Boundary.PERIODIC:
            sides = np.asarray(self.sides)
            diff = diff - sides * np.round(diff / sides)
        return self.space.norm_of(diff)


@dataclass(frozen=True)
class PointConfiguration:
    points: np.ndarray
    energy: float

    def __len__(self):
        return len(self.points)

    def to_json(self) -> str:
        return json.dumps({"points": np.asarray(self.points).tolist(), "energy": self.energy})


def total_energy(p: Potential, box: BoxRegion, points) -> float:
    """``H = sum_{i<j} phi(x_i, x_j)`` from scratch."""
    pts = np.asarray(points, dtype=float).reshape(-1, box.dimension)
    i, j = np.triu_indices(len(pts), k=1)
    if i.size == 0:
        return 0.0
    return float(np.sum(p.evaluate(box.separation(pts[i], pts[j]))))


def _pair_energies(p: Potential, box: BoxRegion, pts: np.ndarray, counts: np.ndarray):
    """Total pair energy of every padded configuration in ``pts``."""
    m, nmax = pts.shape[:2]
    out = np.zeros(m)
    if nmax < 2:
        return out
    valid = np.arange(nmax)[None, :] < counts[:, None]
    i, j = np.triu_indices(nmax, k=1)
    step = max(1, _PAIR_CHUNK // (nmax * nmax))
    for s in range(0, m, step):
        sl = slice(s, s + step)
        dist = box.separation(pts[sl, i], pts[sl, j])
        both = valid[sl, i] & valid[sl, j]
        phi = np.where(both, p.evaluate(np.where(both, dist, np.inf)), 0.0)
        out[sl] = phi.sum(axis=1)
    return out


def _proposal_block(p: Potential, box: BoxRegion, lam: float, seed: int, block: int):
    rng = block_rng(seed, block, stream=1)
    counts = rng.poisson(lam * box.volume, PROPOSAL_BLOCK)
    u = rng.random(PROPOSAL_BLOCK)
    nmax = int(counts.max(initial=0))
    pts = rng.random((PROPOSAL_BLOCK, nmax, box.dimension)) * np.asarray(box.sides)
    energy = _pair_energies(p, box, pts, counts)
    accept = np.nonzero(u < np.exp(-energy))[0]
    # keep only what the batch needs: accepted rows, trimmed to their own max count
    keep_n = int(counts[accept].max(initial=0))
    return accept, counts[accept], pts[accept, :keep_n], energy[accept]


@dataclass
class GibbsSampleBatch:
    potential: Potential
    box: BoxRegion
    lam: float
    seed: int
    points: np.ndarray
    counts: np.ndarray
    energies: np.ndarray
    n_proposals: int
    _configs: list | None = field(default=None, repr=False)
    _flat: tuple | None = field(default=None, repr=False)

    @property
    def n_accepted(self) -> int:
        return len(self.counts)

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_proposals if self.n_proposals else math.nan

    @property
    def mask(self) -> np.ndarray:
        return np.arange(self.points.shape[1])[None, :] < self.counts[:, None]

    @property
    def flat(self):
        """``(points, segment starts, non-empty mask)`` of all points in configuration order."""
        if self._flat is None:
            pts = self.points[self.mask]
            nonempty = self.counts > 0
            starts = np.concatenate([[0], np.cumsum(self.counts)[:-1]])[nonempty]
            self._flat = (pts, starts.astype(np.intp), nonempty)
        return self._flat

    @property
    def configs(self) -> list:
        if self._configs is None:
            self._configs = [PointConfiguration(self.points[m, :c].copy(), float(h))
                             for m, (c, h) in enumerate(zip(self.counts, self.energies))]
        return self._configs

    def subset(self, index) -> "GibbsSampleBatch":
        """Sub-batch of the given configurations (same proposal count, for estimators only)."""
        counts = self.counts[index]
        nmax = int(counts.max(initial=0))
        return GibbsSampleBatch(self.potential, self.box, self.lam, self.seed,
                                self.points[index, :nmax], counts, self.energies[index],
                                self.n_proposals)


def sample_gibbs(p: Potential, box: BoxRegion, lam: float, n_target: int, seed: int,
                 workers: int = 1) -> GibbsSampleBatch:
    """``n_target`` exact draws from the finite-volume Gibbs measure at activity ``lam``.

    Output depends only on ``(p, box, lam, n_target, seed)``.
    """
    if not lam >= 0:
        raise ValueError("activity must be non-negative")
    if lam * box.volume > MAX_MEAN_POINTS:
        raise ValueError(f"lam * volume = {lam * box.volume:.4g} exceeds {MAX_MEAN_POINTS}")
    if n_target < 1:
        raise ValueError("n_target must be positive")
    box.check_potential(p)
    d = box.dimension
    got_pts, got_counts, got_energy = [], [], []
    n_acc, n_prop, block = 0, 0, 0
    workers = max(1, int(workers))
    while n_acc < n_target:
        results = map_blocks(_proposal_block, [(p, box, lam, seed, block + i) for i in range(workers)],
                             workers)
        for accept, counts, pts, energy in results:
            need = n_target - n_acc
            if accept.size >= need:
                got_pts.append(pts[:need])
                got_counts.append(counts[:need])
                got_energy.append(energy[:need])
                n_prop += int(accept[need - 1]) + 1
                n_acc = n_target
                break
            got_pts.append(pts)
            got_counts.append(counts)
            got_energy.append(energy)
            n_acc += accept.size
            n_prop += PROPOSAL_BLOCK
            if n_prop >= ACCEPTANCE_PROBE and n_acc < MIN_ACCEPTANCE * n_prop:
                raise AcceptanceTooLow(
                    f"acceptance {n_acc}/{n_prop} below {MIN_ACCEPTANCE}: lam * volume too large")
        block += workers
    nmax = max((a.shape[1] for a in got_pts), default=0)
    points = np.zeros((n_target, nmax, d))
    row = 0
    for a in got_pts:
        points[row:row + len(a), :a.shape[1]] = a
        row += len(a)
    return GibbsSampleBatch(p, box, float(lam), seed, points, np.concatenate(got_counts),
                            np.concatenate(got_energy), n_prop)


def acceptance_sweep(p: Potential, box: BoxRegion, lams, n_proposals: int, seed: int):
    """Acceptance rates over ``lams`` from one coupled set of proposals.

    Proposals for the largest activity are thinned to each smaller one with
    shared uniforms, so the configuration at a smaller activity is a subset of
    that at a larger one; with a shared acceptance uniform the acceptance
    count is then non-increasing in the activity exactly.
    """
    lams = np.asarray(lams, dtype=float)
    lam_max = float(lams.max())
    rng = block_rng(seed, 0, stream=2)
    counts = rng.poisson(lam_max * box.volume, n_proposals)
    nmax = int(counts.max(initial=0))
    pts = rng.random((n_proposals, nmax, box.dimension)) * np.asarray(box.sides)
    marks = rng.random((n_proposals, nmax))
    u = rng.random(n_proposals)
    valid = np.arange(nmax)[None, :] < counts[:, None]
    rates = []
    for lam in lams:
        keep = valid & (marks < lam / lam_max if lam_max > 0 else False)
        # move kept points to the front of each row
        order = np.argsort(~keep, axis=1, kind="stable")
        kept_pts = np.take_along_axis(pts, order[:, :, None], axis=1)
        energy = _pair_energies(p, box, kept_pts, keep.sum(axis=1))
        rates.append(float(np.mean(u < np.exp(-energy))))
    return np.asarray(rates)


def _require(batch: GibbsSampleBatch):
    if batch.n_accepted == 0:
        raise EmptyBatch("batch has no configurations")


def _config_sum(batch: GibbsSampleBatch, values: np.ndarray) -> np.ndarray:
    """Sum per-point ``values`` (flat order, optionally with trailing axes) per configuration."""
    out = np.zeros((batch.n_accepted,) + values.shape[1:])
    flat, starts, nonempty = batch.flat
    if len(flat):
        out[nonempty] = np.add.reduceat(values, starts, axis=0)
    return out


def _energy_with(batch: GibbsSampleBatch, t, restrict_radius=None, about=None):
    """Per-configuration ``sum_x phi(x, t)``; shape ``(m,)`` for one ``t``, ``(m, g)`` for ``g``.

    With ``restrict_radius`` (scalar or one per ``t``) only points with
    ``d(x, about) < restrict_radius`` contribute: the tilt of a measure towards ``about``.
    """
    p, box = batch.potential, batch.box
    t = np.asarray(t, dtype=float)
    single = t.ndim == 1
    t = t.reshape(-1, box.dimension)
    flat = batch.flat[0]
    dist = box.separation(flat[:, None, :], t[None, :, :])
    phi = p.evaluate(dist)
    if restrict_radius is not None:
        near = box.separation(flat, np.asarray(about, dtype=float))
        phi = np.where(near[:, None] < np.asarray(restrict_radius)[None, ...], phi, 0.0)
    out = _config_sum(batch, np.asarray(phi, dtype=float).reshape(len(flat), len(t)))
    return out[:, 0] if single else out


def _mean_se(x: np.ndarray):
    n = len(x)
    return float(np.mean(x)), (float(np.std(x, ddof=1)) / math.sqrt(n) if n > 1 else math.inf)


@dataclass(frozen=True)
class PartitionEstimate:
    z_hat: float
    log_z: float
    log_z_se: float
    log_pressure: float
    log_pressure_se: float


def estimate_partition(batch: GibbsSampleBatch) -> PartitionEstimate:
    """``Z = exp(lam |box|) * P_Poisson(accept)`` from the batch's acceptance rate."""
    if batch.n_accepted == 0:
        raise ZeroAcceptance("no accepted proposals")
    vol = batch.box.volume
    rate = batch.acceptance_rate
    log_z = batch.lam * vol + math.log(rate)
    se = math.sqrt((1.0 - rate) / (rate * batch.n_proposals))
    return PartitionEstimate(math.exp(log_z), log_z, se, log_z / vol, se / vol)


def estimate_density(batch: GibbsSampleBatch, v):
    """``rho(v) = lam * E exp(-H_v(X))`` and its standard error."""
    _require(batch)
    mean, se = _mean_se(np.exp(-_energy_with(batch, v)))
    return batch.lam * mean, batch.lam * se


def _tilt_log_weight(batch: GibbsSampleBatch, v, w):
    """``log prod_x f(x)`` for the tilt ``f(x) = exp(-phi(x, v) 1{d(x, v) < d(v, w)})``."""
    radius = float(batch.box.separation(np.asarray(v, dtype=float), np.asarray(w, dtype=float)))
    return -_energy_with(batch, v, restrict_radius=radius, about=v), radius


def estimate_tilted_density(batch: GibbsSampleBatch, v, w, target):
    """Density at ``target`` of the batch's measure tilted towards ``v`` up to ``d(v, w)``.

    Returns ``(rho, se)``; the standard error comes from the delta method for
    the ratio of the two paired sample means.
    """
    _require(batch)
    log_b, radius = _tilt_log_weight(batch, v, w)
    b = np.exp(log_b)
    a = np.exp(log_b - _energy_with(batch, target))
    bbar = float(b.mean())
    if bbar < 1e-12:
        raise DegenerateWeights(f"mean tilt weight {bbar:.3g} is below 1e-12")
    box = batch.box
    d_tv = float(box.separation(np.asarray(target, dtype=float), np.asarray(v, dtype=float)))
    f_t = batch.potential.boltzmann(d_tv) if d_tv < radius else 1.0
    ratio = float(a.mean()) / bbar
    n = len(a)
    se = float(np.std(a - ratio * b, ddof=1)) / (math.sqrt(n) * bbar) if n > 1 else math.inf
    scale = batch.lam * f_t
    return scale * ratio, scale * se


# -- quadrature over the Mayer support -------------------------------------------------

@dataclass(frozen=True)
class QuadGrid:
    """Nodes and weights (already multiplied by the Mayer weight at ``v``)."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)


def _restrict(box: BoxRegion, nodes, weights):
    if box.boundary is Boundary.PERIODIC:
        nodes = np.mod(nodes, np.asarray(box.sides))
        return QuadGrid(nodes, weights)
    inside = np.all((nodes >= 0) & (nodes <= np.asarray(box.sides)), axis=1) & (weights != 0)
    return QuadGrid(nodes[inside], weights[inside])


def product_grid(p: Potential, box: BoxRegion, v, n: int = 16) -> QuadGrid:
    """Midpoint product rule with ``n`` cells per axis on the cube around ``v`` of half-side ``cutoff``."""
    if n < 8:
        raise ValueError("need at least 8 nodes per axis")
    v = np.asarray(v, dtype=float)
    d, r = box.dimension, p.cutoff
    h = 2.0 * r / n
    axis = -r + h * (np.arange(n) + 0.5)
    offsets = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    weights = h ** d * p.mayer(box.space.norm_of(offsets))
    return _restrict(box, v + offsets, np.asarray(weights, dtype=float))


def polar_grid(p: Potential, box: BoxRegion, v, n: int = 16) -> QuadGrid:
    """Gauss-Legendre in the radius (per constant piece of the potential) times a uniform angle rule.

    Only for the L2 norm in d = 1 or 2. ``n`` radial nodes per piece and
    ``2 n`` angles.
    """
    if n < 8:
        raise ValueError("need at least 8 nodes per axis")
    if box.norm is not Norm.L2 or box.dimension > 2:
        raise NotImplementedError("polar grid supports L2 boxes in one or two dimensions")
    v = np.asarray(v, dtype=float)
    edges = _piece_edges(p)
    x, wx = special.roots_legendre(n)
    radii, rweights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        radii.append(lo + (hi - lo) * (x + 1) / 2)
        rweights.append(wx * (hi - lo) / 2)
    radii, rweights = np.concatenate(radii), np.concatenate(rweights)
    rweights = rweights * p.mayer(radii)
    if box.dimension == 1:
        nodes = np.concatenate([v - radii, v + radii])[:, None]
        weights = np.concatenate([rweights, rweights])
    else:
        theta = 2 * np.pi * (np.arange(2 * n) + 0.5) / (2 * n)
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        nodes = (v + radii[:, None, None] * dirs[None]).reshape(-1, 2)
        weights = (rweights[:, None] * radii[:, None] * (2 * np.pi / (2 * n))
                   * np.ones(len(theta))[None]).reshape(-1)
    return _restrict(box, nodes, weights)


def _piece_edges(p: Potential):
    edges = getattr(p, "edges", None)
    if edges is None:
        return np.array([0.0, p.cutoff])
    return np.asarray(edges, dtype=float)


@dataclass(frozen=True)
class ResidualReport:
    lhs: float
    rhs: float
    se: float
    extra: dict = field(default_factory=dict)

    @property
    def z(self) -> float:
        diff = abs(self.lhs - self.rhs)
        if diff == 0:
            return 0.0
        return diff / self.se if self.se > 0 else math.inf

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "se": self.se, "z": self.z, **self.extra}


_NODE_CHUNK = 64


def _recursion_sides(batch: GibbsSampleBatch, v, grid: QuadGrid):
    lam = batch.lam
    v = np.asarray(v, dtype=float)
    a_v = np.exp(-_energy_with(batch, v))
    m_v = float(a_v.mean())
    s = 0.0
    infl = np.zeros(batch.n_accepted)
    for lo in range(0, len(grid), _NODE_CHUNK):
        nodes = grid.nodes[lo:lo + _NODE_CHUNK]
        c = grid.weights[lo:lo + _NODE_CHUNK]
        radius = batch.box.separation(nodes, v)
        log_b = -_energy_with(batch, nodes, restrict_radius=radius, about=v)
        b = np.exp(log_b)
        a = np.exp(log_b - _energy_with(batch, nodes))
        big_a, big_b = a.mean(axis=0), b.mean(axis=0)
        if np.any(big_b < 1e-12):
            raise DegenerateWeights(f"mean tilt weight {big_b.min():.3g} is below 1e-12")
        s += float(np.sum(c * lam * big_a / big_b))
        infl += ((a - big_a) / big_b - big_a * (b - big_b) / big_b ** 2) @ (c * lam)
    lhs = lam * m_v
    rhs = lam * math.exp(-s)
    psi = lam * (a_v - m_v) + rhs * infl
    n = batch.n_accepted
    se = float(np.std(psi, ddof=1)) / math.sqrt(n) if n > 1 else math.inf
    return lhs, rhs, se


def verify_recursion_identity(batch: GibbsSampleBatch, v, grid: QuadGrid | None = None,
                              n: int = 16, refine: bool = True) -> ResidualReport:
    """Compare ``rho(v)`` with ``lam exp(-int rho_{v->w}(w) (1 - e^{-phi(v, w)}) dw)``.

    Both sides are estimated on the same batch; the standard error is that of
    the difference (influence-function form). With ``refine`` the quadrature
    is repeated with twice the nodes per axis and the change in ``rhs`` is
    reported as ``quad_change``.
    """
    _require(batch)
    p, box = batch.potential, batch.box
    make = polar_grid if (box.norm is Norm.L2 and box.dimension <= 2) else product_grid
    if grid is None:
        grid = make(p, box, v, n)
    lhs, rhs, se = _recursion_sides(batch, v, grid)
    extra = {"nodes": len(grid)}
    if refine:
        _, rhs2, _ = _recursion_sides(batch, v, make(p, box, v, 2 * n))
        extra["quad_change"] = abs(rhs2 - rhs)
        extra["quad_change_se"] = abs(rhs2 - rhs) / se if se > 0 else 0.0
    return ResidualReport(lhs, rhs, se, extra)


def verify_kpoint_product(batch: GibbsSampleBatch, points, split: bool = True) -> ResidualReport:
    """Direct ``k``-point density against the product of tilted one-point densities.

    The ``j``-th factor is the density at ``v_j`` of the measure reweighted by
    ``f_j(x) = exp(-sum_{i<j} phi(v_i, x))``. On one shared batch the product
    telescopes into the direct estimator identically; with ``split`` each
    factor uses its own disjoint part of the batch, which makes the check
    non-trivial.
    """
    _require(batch)
    pts = np.asarray(points, dtype=float).reshape(-1, batch.box.dimension)
    k = len(pts)
    if not 2 <= k <= 4:
        raise ValueError("k must be between 2 and 4")
    p, box, lam = batch.potential, batch.box, batch.lam
    h_pts = total_energy(p, box, pts)
    sum_h = sum(_energy_with(batch, q) for q in pts)
    direct, direct_se = _mean_se(np.exp(-sum_h))
    scale = lam ** k * math.exp(-h_pts)
    lhs, lhs_se = scale * direct, scale * direct_se
    n = batch.n_accepted
    parts = np.array_split(np.arange(n), k) if split else [np.arange(n)] * k
    factors, rel_var = [], 0.0
    for j in range(k):
        sub = batch.subset(parts[j]) if split else batch
        log_b = -sum((_energy_with(sub, pts[i]) for i in range(j)), np.zeros(sub.n_accepted))
        b = np.exp(log_b)
        a = np.exp(log_b - _energy_with(sub, pts[j]))
        f_j = math.exp(-sum(float(p.evaluate(box.separation(pts[i], pts[j]))) for i in range(j)))
        bbar = float(b.mean())
        if bbar < 1e-12:
            raise DegenerateWeights(f"mean tilt weight {bbar:.3g} is below 1e-12")
        ratio = float(a.mean()) / bbar
        factors.append(lam * f_j * ratio)
        if ratio > 0:
            se = float(np.std(a - ratio * b, ddof=1)) / (math.sqrt(len(a)) * bbar)
            rel_var += (se / ratio) ** 2
    rhs = float(np.prod(factors))
    rhs_se = abs(rhs) * math.sqrt(rel_var)
    se = math.hypot(lhs_se, rhs_se) if split else math.hypot(lhs_se, 0.0)
    return ResidualReport(lhs, rhs, se, {"factors": factors, "split": split})


def domination_check(batch: GibbsSampleBatch) -> ResidualReport:
    """Mean point count against the Poisson mean ``lam |box|``."""
    _require(batch)
    mean, se = _mean_se(batch.counts.astype(float))
    return ResidualReport(mean, batch.lam * batch.box.volume, se,
                          {"ok": mean <= batch.lam * batch.box.volume + 3 * se})


def ruelle_check(batch: GibbsSampleBatch, v) -> ResidualReport:
    rho, se = estimate_density(batch, v)
    return ResidualReport(rho, batch.lam, se, {"ok": rho <= batch.lam + 3 * se})


# -- hard rods in one dimension -----------------------------------------------------

def tonks_partition(lam: float, length: float, r: float) -> float:
    """Partition function of hard rods (exclusion distance ``r``) on ``[0, length]``.

    ``sum_k lam^k / k! * (length - (k-1) r)_+^k``; the series is finite.
    """
    if length <= 0:
        return 1.0
    total, k = 1.0, 1
    while length - (k - 1) * r > 0:
        total += math.exp(k * math.log(lam * (length - (k - 1) * r)) - math.lgamma(k + 1)) \
            if lam > 0 else 0.0
        k += 1
    return total


def tonks_density(lam: float, length: float, r: float, v: float) -> float:
    """One-point density of hard rods at ``v`` in ``[0, length]``."""
    left = tonks_partition(lam, v - r, r)
    right = tonks_partition(lam, length - v - r, r)
    return lam * left * right / tonks_partition(lam, length, r)


# -- persistence --------------------------------------------------------------------

def write_configs(batch: GibbsSampleBatch, path):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w") as fh:
        for cfg in batch.configs:
            fh.write(cfg.to_json() + "\n")
    tmp.replace(path)


def read_configs(path, dimension: int | None = None) -> list:
    """Configurations from a JSON-lines file; empty ones get shape ``(0, dimension)``.

    ``dimension`` defaults to that of the first non-empty configuration.
    """
    recs = []
    with Path(path).open() as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                recs.append((np.asarray(rec["points"], dtype=float), float(rec["energy"])))
    if dimension is None:
        dimension = next((pts.shape[1] for pts, _ in recs if pts.ndim == 2 and pts.size), 1)
    return [PointConfiguration(pts.reshape(-1, dimension), h) for pts, h in recs]
