import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from pwcc import (AcceptanceTooLow, DegenerateWeights, EmptyBatch, HardCube, HardSphere, Norm,
                  RadialTable, Strauss, zero_potential)
from pwcc import gibbs as gb
from pwcc.gibbs import BoxRegion

# independent mpmath oracles (exact interval-packing volumes)
TONKS_RHO_L10 = 0.14450651877140
TONKS_LOGZ_L8_K6 = 1.36416687743818
TONKS_LOGZ_L10_K6 = 1.70199124512005


@pytest.fixture(scope="module")
def rods10():
    return gb.sample_gibbs(HardSphere(1.0), BoxRegion((10.0,)), 0.2, 10 ** 5, seed=31)


@pytest.fixture(scope="module")
def strauss_box():
    return gb.sample_gibbs(Strauss(1.0, 1.0), BoxRegion((4.0, 4.0)), 0.1, 2 * 10 ** 4, seed=32)


@pytest.fixture(scope="module")
def ideal():
    return gb.sample_gibbs(zero_potential(1.0), BoxRegion((5.0, 5.0)), 0.2, 10 ** 4, seed=33)


def test_box_region():
    box = BoxRegion((2.0, 3.0))
    assert box.volume == 6.0 and box.dimension == 2
    assert box.contains((1.0, 3.0)) and not box.contains((2.1, 0.0))
    with pytest.raises(ValueError):
        BoxRegion((1.0, 0.0))
    per = BoxRegion((4.0, 4.0), "periodic")
    assert per.separation((0.1, 0.1), (3.9, 3.9)) == pytest.approx(math.sqrt(0.08))
    with pytest.raises(ValueError):
        BoxRegion((1.5, 4.0), "periodic").check_potential(HardSphere(1.0))
    with pytest.raises(ValueError):
        gb.sample_gibbs(HardSphere(1.0), BoxRegion((1.5, 4.0), "periodic"), 0.1, 10, seed=1)


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.floats(0, 4), st.floats(0, 4)), st.tuples(st.floats(0, 4), st.floats(0, 4)))
def test_minimum_image_is_shortest(x, y):
    box = BoxRegion((4.0, 4.0), "periodic")
    d = box.separation(x, y)
    assert d <= math.sqrt(8.0) + 1e-12
    assert d <= BoxRegion((4.0, 4.0)).separation(x, y) + 1e-12
    assert d == pytest.approx(box.separation(y, x), abs=1e-12)


def test_ideal_gas_is_exact(ideal):
    lam_v = 0.2 * 25
    assert ideal.acceptance_rate == 1.0 and ideal.n_proposals == ideal.n_accepted
    counts = ideal.counts
    assert abs(counts.mean() - lam_v) <= 3 * math.sqrt(lam_v / len(counts))
    kmax = 12
    observed = np.bincount(np.minimum(counts, kmax), minlength=kmax + 1)
    probs = stats.poisson.pmf(np.arange(kmax), lam_v)
    probs = np.append(probs, 1 - probs.sum())
    assert stats.chisquare(observed, probs * len(counts)).pvalue > 1e-3
    est = gb.estimate_partition(ideal)
    assert est.z_hat == math.exp(lam_v) and est.log_z_se == 0.0
    assert gb.estimate_density(ideal, (2.5, 2.5)) == (0.2, 0.0)


def test_zero_activity():
    batch = gb.sample_gibbs(HardSphere(1.0), BoxRegion((5.0, 5.0)), 0.0, 50, seed=1)
    assert np.all(batch.counts == 0) and batch.acceptance_rate == 1.0
    assert gb.estimate_partition(batch).z_hat == 1.0


def test_activity_guard():
    with pytest.raises(ValueError):
        gb.sample_gibbs(HardSphere(1.0), BoxRegion((10.0, 10.0)), 2.1, 10, seed=1)
    with pytest.raises(ValueError):
        gb.sample_gibbs(HardSphere(1.0), BoxRegion((10.0, 10.0)), -0.1, 10, seed=1)


def test_acceptance_too_low(monkeypatch):
    monkeypatch.setattr(gb, "ACCEPTANCE_PROBE", 2 * gb.PROPOSAL_BLOCK)
    with pytest.raises(AcceptanceTooLow):
        gb.sample_gibbs(HardSphere(1.0), BoxRegion((10.0, 10.0)), 0.6, 10, seed=1)


def test_determinism_and_workers():
    p, box = Strauss(1.0, 1.0), BoxRegion((4.0, 4.0))
    a = gb.sample_gibbs(p, box, 0.2, 3000, seed=8)
    b = gb.sample_gibbs(p, box, 0.2, 3000, seed=8, workers=2)
    assert a.n_proposals == b.n_proposals
    assert np.array_equal(a.points, b.points) and np.array_equal(a.energies, b.energies)
    c = gb.sample_gibbs(p, box, 0.2, 3000, seed=9)
    assert not np.array_equal(a.counts, c.counts)


@pytest.mark.parametrize("p,norm", [(HardSphere(1.0), Norm.L2), (HardCube(1.0), Norm.LINF),
                                    (Strauss(1.0, 1.0), Norm.L2),
                                    (RadialTable((0.5, 1.0), (math.inf, 0.7)), Norm.L2)],
                         ids=["hard_sphere", "hard_cube", "strauss", "radial_table"])
def test_domination_and_energy(p, norm):
    box = BoxRegion((5.0, 5.0), norm=norm)
    batch = gb.sample_gibbs(p, box, 0.3, 4000, seed=12)
    rep = gb.domination_check(batch)
    assert rep.extra["ok"] and rep.lhs < rep.rhs
    for cfg in batch.configs[:500]:
        assert abs(gb.total_energy(p, box, cfg.points) - cfg.energy) <= 1e-9
        assert math.isfinite(cfg.energy)
        assert all(box.contains(x) for x in cfg.points)


def test_domination_example():
    batch = gb.sample_gibbs(HardSphere(1.0), BoxRegion((5.0, 5.0)), 0.1, 10 ** 4, seed=2)
    mean, se = batch.counts.mean(), batch.counts.std(ddof=1) / 100
    assert mean <= 2.5 + 3 * se and mean < 2.5


def test_ruelle_bound(strauss_box, rods10):
    rng = np.random.default_rng(3)
    for batch in (strauss_box, rods10):
        sides = np.asarray(batch.box.sides)
        for v in rng.random((20, len(sides))) * sides:
            assert gb.ruelle_check(batch, v).extra["ok"]


def test_acceptance_monotone_in_activity():
    lams = np.linspace(0.0, 0.5, 11)
    rates = gb.acceptance_sweep(Strauss(1.0, 1.0), BoxRegion((5.0, 5.0)), lams, 4000, seed=4)
    assert rates[0] == 1.0 and np.all(np.diff(rates) <= 0)


def test_tonks_oracle():
    assert gb.tonks_density(0.2, 10.0, 1.0, 5.0) == pytest.approx(TONKS_RHO_L10, rel=1e-12)
    # full series differs from the six-term truncation only by the seventh term on
    lam, length = 0.2, 8.0
    trunc = 1 + sum(lam ** k / math.factorial(k) * (length - (k - 1)) ** k for k in range(1, 7))
    assert math.log(trunc) == pytest.approx(TONKS_LOGZ_L8_K6, rel=1e-13)
    assert math.log(gb.tonks_partition(lam, length, 1.0)) == pytest.approx(TONKS_LOGZ_L8_K6, abs=1e-6)
    assert gb.tonks_partition(lam, 0.5, 1.0) == pytest.approx(1 + lam * 0.5)


def test_partition_against_tonks(rods10):
    est = gb.estimate_partition(rods10)
    exact = math.log(gb.tonks_partition(0.2, 10.0, 1.0))
    assert abs(est.log_z - exact) <= 3 * est.log_z_se
    assert abs(est.log_z - TONKS_LOGZ_L10_K6) <= 3 * est.log_z_se + 1e-5
    assert 0.0 <= est.log_z <= 0.2 * 10.0
    assert est.log_pressure == pytest.approx(est.log_z / 10.0)


def test_density_against_tonks(rods10):
    rho, se = gb.estimate_density(rods10, (5.0,))
    assert abs(rho - TONKS_RHO_L10) <= 3 * se
    rho_edge, se_edge = gb.estimate_density(rods10, (0.2,))
    assert abs(rho_edge - gb.tonks_density(0.2, 10.0, 1.0, 0.2)) <= 3 * se_edge


def test_tilted_density_examples(strauss_box, ideal):
    v, t = (2.0, 2.0), (2.6, 2.3)
    assert gb.estimate_tilted_density(strauss_box, v, v, t) == pytest.approx(
        gb.estimate_density(strauss_box, t), rel=1e-12)
    rho, se = gb.estimate_tilted_density(ideal, (1.0, 1.0), (2.0, 1.0), (1.5, 1.5))
    assert rho == 0.2 and se == 0.0
    hard = gb.sample_gibbs(HardSphere(1.0), BoxRegion((4.0, 4.0)), 0.1, 2000, seed=5)
    assert gb.estimate_tilted_density(hard, v, (2.9, 2.0), (2.3, 2.0))[0] == 0.0


def test_tilted_density_matches_reweighting(strauss_box):
    # tilt weights computed point by point through the public potential interface
    p, box = strauss_box.potential, strauss_box.box
    v, w, t = np.array([2.0, 2.0]), np.array([2.8, 2.0]), np.array([2.5, 2.4])
    radius = box.separation(v, w)
    num = den = 0.0
    for cfg in strauss_box.configs[:3000]:
        pts = cfg.points
        near = box.separation(pts, v) < radius if len(pts) else np.zeros(0, bool)
        f = math.exp(-float(np.sum(p.evaluate(box.separation(pts[near], v))))) if len(pts) else 1.0
        num += f * math.exp(-float(np.sum(p.evaluate(box.separation(pts, t))))) if len(pts) else f
        den += f
    f_t = p.boltzmann(box.separation(t, v)) if box.separation(t, v) < radius else 1.0
    expected = 0.1 * f_t * num / den
    assert gb.estimate_tilted_density(strauss_box.subset(np.arange(3000)), v, w, t)[0] == \
        pytest.approx(expected, rel=1e-12)


def test_degenerate_weights():
    p = RadialTable((1.0,), (40.0,))
    batch = gb.sample_gibbs(p, BoxRegion((3.0, 3.0)), 0.5, 200, seed=6)
    full = batch.subset(np.nonzero(batch.counts >= 1)[0])
    centre = full.points[:, 0]
    # every configuration has a point right next to v
    lone = gb.GibbsSampleBatch(p, batch.box, 0.5, 0, centre[:, None, :] * 0 + 1.5,
                               np.ones(len(centre), int), np.zeros(len(centre)), 200)
    with pytest.raises(DegenerateWeights):
        gb.estimate_tilted_density(lone, (1.5, 1.6), (1.5, 2.5), (2.0, 2.0))


def test_empty_batch(strauss_box):
    empty = strauss_box.subset(np.arange(0))
    with pytest.raises(EmptyBatch):
        gb.estimate_density(empty, (1.0, 1.0))


def test_recursion_identity_ideal(ideal):
    rep = gb.verify_recursion_identity(ideal, (2.5, 2.5))
    assert rep.lhs == rep.rhs == 0.2


def test_recursion_identity_rods():
    batch = gb.sample_gibbs(HardSphere(1.0), BoxRegion((8.0,)), 0.2, 10 ** 5, seed=41)
    rep = gb.verify_recursion_identity(batch, (4.0,))
    assert rep.z <= 3
    assert rep.extra["quad_change"] < rep.se
    assert abs(rep.lhs - gb.tonks_density(0.2, 8.0, 1.0, 4.0)) <= 3 * rep.se


def test_recursion_identity_strauss(strauss_box):
    rep = gb.verify_recursion_identity(strauss_box, (2.0, 2.0), n=8)
    assert rep.z <= 3 and rep.extra["quad_change"] < rep.se


def test_product_grid_rule():
    box = BoxRegion((10.0, 10.0))
    grid = gb.product_grid(HardSphere(1.0), box, (5.0, 5.0), n=64)
    assert grid.weights.sum() == pytest.approx(math.pi, rel=1e-2)
    polar = gb.polar_grid(Strauss(1.0, 1.0), box, (5.0, 5.0), n=8)
    assert polar.weights.sum() == pytest.approx((1 - math.exp(-1)) * math.pi, rel=1e-12)
    with pytest.raises(ValueError):
        gb.product_grid(HardSphere(1.0), box, (5.0, 5.0), n=4)
    # nodes outside a free box are dropped
    corner = gb.polar_grid(HardSphere(1.0), box, (0.0, 0.0), n=8)
    assert corner.weights.sum() == pytest.approx(math.pi / 4, rel=1e-2)


def test_kpoint_examples(ideal):
    rep = gb.verify_kpoint_product(ideal, [(1.0, 1.0), (1.5, 1.0)])
    assert rep.lhs == pytest.approx(0.04, rel=1e-15) and rep.rhs == pytest.approx(0.04, rel=1e-15)
    hard = gb.sample_gibbs(HardSphere(1.0), BoxRegion((4.0, 4.0)), 0.1, 2000, seed=5)
    rep = gb.verify_kpoint_product(hard, [(2.0, 2.0), (2.5, 2.0)])
    assert rep.lhs == 0.0 and rep.rhs == 0.0
    with pytest.raises(ValueError):
        gb.verify_kpoint_product(ideal, [(1.0, 1.0)])


def test_kpoint_strauss(strauss_box):
    pts = [(2.0, 2.0), (2.5, 2.0)]
    rep = gb.verify_kpoint_product(strauss_box, pts)
    assert rep.z <= 3
    shared = gb.verify_kpoint_product(strauss_box, pts, split=False)
    assert shared.rhs == pytest.approx(shared.lhs, rel=1e-12)
    three = gb.verify_kpoint_product(strauss_box, pts + [(2.0, 2.7)])
    assert three.z <= 3


def test_jsonl_round_trip(strauss_box, tmp_path):
    small = strauss_box.subset(np.arange(50))
    path = tmp_path / "configs.jsonl"
    gb.write_configs(small, path)
    back = gb.read_configs(path)
    assert len(back) == 50
    for a, b in zip(small.configs, back):
        assert np.array_equal(a.points, b.points) and a.energy == b.energy
