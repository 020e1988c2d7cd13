"""Repulsive, finite-range, radial pair potentials.

A potential is a function of the separation ``s = ||x - y||`` measured in the
norm of the ambient :class:`~pwcc.geometry.Space`. Infinite values (hard
cores) never enter floating point arithmetic as ``inf * something``: every
potential exposes its Boltzmann factor ``exp(-phi)`` directly, which is exactly
0 inside a hard core, and the Mayer weight is ``1 - exp(-phi)``. Products of
an indicator with ``phi`` are always formed as ``where(indicator, exp(-phi), 1)``
so the convention ``0 * inf = 0`` holds by construction.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate

from .errors import DegeneratePotential, QuadratureFailure
from .geometry import Norm, Space

#: knots in the inverse-CDF table used for tabulated radial laws
CDF_TABLE_KNOTS = 2 ** 12
QUAD_RTOL = 1e-10


class Potential:
    """Base class. Subclasses implement :meth:`boltzmann` and :attr:`cutoff`."""

    kind = "abstract"
    hard = False

    @property
    def cutoff(self) -> float:
        raise NotImplementedError

    def boltzmann(self, s):
        """``exp(-phi(s))``; exactly 0 inside a hard core."""
        raise NotImplementedError

    def evaluate(self, s):
        """``phi(s)``, with ``inf`` inside a hard core."""
        raise NotImplementedError

    def mayer(self, s):
        """Mayer weight ``1 - exp(-phi(s))`` in [0, 1]."""
        out = 1.0 - np.asarray(self.boltzmann(s), dtype=float)
        return float(out) if out.ndim == 0 else out

    def temperedness_constant(self, space: Space) -> float:
        raise NotImplementedError

    def sample_displacement(self, space: Space, rng, size: int):
        """Draw ``size`` vectors with density ``mayer(||w||) / C_phi``."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


class _StepPotential(Potential):
    """A constant Boltzmann factor ``inside`` on ``[0, r)``, 1 beyond."""

    inside = 0.0
    phi_inside = math.inf

    def evaluate(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(self._in_core(s), self.phi_inside, 0.0)
        return float(out) if out.ndim == 0 else out

    def boltzmann(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(self._in_core(s), self.inside, 1.0)
        return float(out) if out.ndim == 0 else out

    def _in_core(self, s):
        return s < self.r

    @property
    def cutoff(self) -> float:
        return self.r

    def temperedness_constant(self, space: Space) -> float:
        return (1.0 - self.inside) * space.ball_volume(self.r)

    def sample_displacement(self, space: Space, rng, size: int):
        # constant Mayer weight inside r: the law is uniform on the ball
        return space.sample_uniform_ball(rng, self.r, size=size)


@dataclass(frozen=True)
class HardSphere(_StepPotential):
    """``phi = inf`` for separations below ``r``, 0 otherwise."""

    r: float
    kind = "hard_sphere"
    hard = True
    natural_norm = Norm.L2

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("hard-sphere radius must be positive")

    def to_config(self):
        return {"kind": self.kind, "r": self.r}


@dataclass(frozen=True)
class HardCube(HardSphere):
    """Hard core in the sup norm; identical to :class:`HardSphere` on an L-inf space."""

    kind = "hard_cube"
    natural_norm = Norm.LINF


@dataclass(frozen=True)
class Strauss(_StepPotential):
    """``phi = a`` for separations ``<= r``, 0 otherwise."""

    r: float
    a: float
    kind = "strauss"

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("Strauss radius must be positive")
        if not self.a > 0:
            raise ValueError("Strauss strength must be positive")

    @property
    def inside(self):
        return math.exp(-self.a)

    @property
    def phi_inside(self):
        return self.a

    def _in_core(self, s):
        return s <= self.r

    def to_config(self):
        return {"kind": self.kind, "r": self.r, "a": self.a}


@dataclass(frozen=True, eq=False)
class RadialTable(Potential):
    """Piecewise-constant radial potential.

    ``values[i]`` holds on ``[radii[i-1], radii[i])`` (with ``radii[-1] = 0``),
    so the step function is right-continuous and ``phi = 0`` from
    ``radii[-1]`` on. ``cutoff`` defaults to the last radius and may be larger.
    ``inf`` entries are hard cores.
    """

    radii: tuple
    values: tuple
    cutoff_: float | None = None
    kind = "radial_table"
    _table: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if radii.ndim != 1 or radii.size == 0 or radii.shape != values.shape:
            raise ValueError("radii and values must be non-empty sequences of equal length")
        if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
            raise ValueError("radii must be positive and strictly increasing")
        if np.any(np.isnan(values)) or np.any(values < 0):
            raise ValueError("table values must be non-negative (repulsive potential)")
        cutoff = float(radii[-1]) if self.cutoff_ is None else float(self.cutoff_)
        if cutoff < radii[-1]:
            raise ValueError("cutoff must be at least the last tabulated radius")
        object.__setattr__(self, "radii", tuple(radii.tolist()))
        object.__setattr__(self, "values", tuple(values.tolist()))
        object.__setattr__(self, "cutoff_", cutoff)

    def __eq__(self, other):
        return (isinstance(other, RadialTable) and self.radii == other.radii
                and self.values == other.values and self.cutoff_ == other.cutoff_)

    def __hash__(self):
        return hash((self.radii, self.values, self.cutoff_))

    @property
    def hard(self):
        return bool(np.isinf(self.values).any())

    @property
    def cutoff(self) -> float:
        return self.cutoff_

    @property
    def edges(self):
        return np.concatenate([[0.0], self.radii])

    @property
    def piece_boltzmann(self):
        return np.exp(-np.asarray(self.values))

    def _lookup(self, table, s):
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(np.asarray(self.radii), s, side="right")
        out = np.asarray(table)[idx]
        return float(out) if out.ndim == 0 else out

    def evaluate(self, s):
        return self._lookup(self.values + (0.0,), s)

    def boltzmann(self, s):
        return self._lookup(np.append(self.piece_boltzmann, 1.0), s)

    @classmethod
    def from_csv(cls, path, cutoff=None):
        """Read a two-column ``s,phi`` file (header required; ``inf`` allowed)."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader)]
            if header != ["s", "phi"]:
                raise ValueError(f"{path}: header must be 's,phi', got {','.join(header)!r}")
            rows = [(float(a), float(b)) for a, b in (r for r in reader if r)]
        radii, values = zip(*rows)
        return cls(radii, values, cutoff)

    def temperedness_constant(self, space: Space) -> float:
        edges = self.edges
        mayer = 1.0 - self.piece_boltzmann
        total = 0.0
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            for lo, hi, m in zip(edges[:-1], edges[1:], mayer):
                if m == 0.0:
                    continue
                try:
                    val, _ = integrate.quad(lambda s: space.sphere_area(s), lo, hi,
                                            epsabs=0.0, epsrel=QUAD_RTOL, limit=200)
                except integrate.IntegrationWarning as exc:
                    raise QuadratureFailure(str(exc)) from exc
                total += m * val
        return total

    def _inverse_cdf_table(self, space: Space):
        key = (space.dimension, space.norm)
        if key not in self._table:
            d = space.dimension
            edges = self.edges
            mayer = 1.0 - self.piece_boltzmann
            knots = np.union1d(np.linspace(0.0, edges[-1], CDF_TABLE_KNOTS), edges)
            # radial mass of [0, s] is sum over pieces of m_i * (min(s, hi)^d - lo^d)_+
            lo, hi = edges[:-1], edges[1:]
            clipped = np.clip(knots[:, None], lo, hi)
            cdf = ((clipped ** d - lo ** d) * mayer).sum(axis=1)
            if cdf[-1] <= 0:
                raise DegeneratePotential("potential has zero Mayer weight everywhere")
            self._table[key] = (cdf / cdf[-1], knots)
        return self._table[key]

    def sample_displacement(self, space: Space, rng, size: int):
        cdf, knots = self._inverse_cdf_table(space)
        radius = np.interp(rng.random(size), cdf, knots)
        return space.sample_direction(rng, size) * radius[:, None]

    def to_config(self):
        return {"kind": self.kind, "radii": list(self.radii),
                "values": list(self.values), "cutoff": self.cutoff_}


def zero_potential(cutoff: float = 1.0) -> RadialTable:
    """The ideal gas, phi = 0, as a table."""
    return RadialTable((cutoff,), (0.0,))


def evaluate(p: Potential, s):
    return p.evaluate(s)


def mayer(p: Potential, s):
    return p.mayer(s)


def temperedness_constant(p: Potential, space: Space) -> float:
    return p.temperedness_constant(space)


def sample_mayer_displacement(p: Potential, space: Space, rng, size: int = 1):
    if not p.temperedness_constant(space) > 0:
        raise DegeneratePotential("C_phi = 0: the Mayer density cannot be normalised")
    return p.sample_displacement(space, rng, size)


_REQUIRED = {
    "hard_sphere": ("r",),
    "hard_cube": ("r",),
    "strauss": ("r", "a"),
    "radial_table": (),
}
_OPTIONAL = {"radial_table": ("csv", "radii", "values", "cutoff")}


def from_config(block: dict, base_dir=None) -> Potential:
    """Build a potential from a config mapping such as ``{kind = "hard_sphere", r = 1.0}``.

    Raises ``KeyError`` for missing or unknown keys and ``ValueError`` for bad values.
    """
    block = dict(block)
    kind = block.pop("kind", None)
    if kind not in _REQUIRED:
        raise ValueError(f"unknown potential kind {kind!r}")
    missing = [k for k in _REQUIRED[kind] if k not in block]
    if missing:
        raise KeyError(f"potential kind {kind!r} requires key(s) {missing}")
    unknown = set(block) - set(_REQUIRED[kind]) - set(_OPTIONAL.get(kind, ()))
    if unknown:
        raise KeyError(f"unknown potential key(s) {sorted(unknown)}")
    if kind == "hard_sphere":
        return HardSphere(float(block["r"]))
    if kind == "hard_cube":
        return HardCube(float(block["r"]))
    if kind == "strauss":
        return Strauss(float(block["r"]), float(block["a"]))
    cutoff = block.get("cutoff")
    if "csv" in block:
        path = Path(block["csv"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return RadialTable.from_csv(path, cutoff)
    if "radii" not in block or "values" not in block:
        raise KeyError("radial_table needs either 'csv' or both 'radii' and 'values'")
    return RadialTable(tuple(block["radii"]), tuple(block["values"]), cutoff)
