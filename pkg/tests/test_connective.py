import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwcc import (DimensionMismatch, EmptyInput, HardCube, HardSphere, InvalidK, KindNormMismatch,
                  Method, Norm, RadialTable, Space, Strauss, VkEstimate)
from pwcc import connective as cn

# independent mpmath oracle of the two-regime radial integral, divided by pi^2
HARD_DISK_RATIO = 0.706748335783172


def test_chain_weight_examples(plane, hard_disk, strauss1):
    assert cn.chain_weight(hard_disk, plane, [(0, 0), (0.5, 0)]) == 1.0
    assert cn.chain_weight(hard_disk, plane, [(0, 0), (0.9, 0), (0.3, 0)]) == 0.0
    # independent value e^-1 (1 - e^-1)^2
    assert cn.chain_weight(strauss1, plane, [(0, 0), (0.9, 0), (0.3, 0)]) == pytest.approx(
        0.14699594306608088, rel=1e-14)


def test_chain_weight_errors(plane, hard_disk):
    with pytest.raises(DimensionMismatch):
        cn.chain_weight(hard_disk, plane, [(0, 0, 0), (1, 0, 0)])
    with pytest.raises(ValueError):
        cn.chain_weight(hard_disk, plane, [(0, 0)])


def test_degenerate_step_does_not_damp(plane, hard_disk):
    # d(v_0, v_1) = 0: the indicator 1{d(v_2, v_0) < 0} never fires
    assert cn.damping_weitz(hard_disk, plane, [(0, 0), (0, 0), (0.5, 0)]) == 1.0


def test_damping_examples(plane, hard_disk):
    assert cn.damping_weitz(hard_disk, plane, [(0.3, 0.1)]) == 1.0
    assert cn.damping_weitz(hard_disk, plane, [(0, 0), (0.4, 0)]) == 1.0
    assert cn.damping_weitz(hard_disk, plane, [(0, 0), (0.9, 0), (0.3, 0)]) == 0.0


def _random_tuples(rng, p, space, n, length):
    out = []
    for _ in range(n):
        steps = p.sample_displacement(space, rng, length - 1) * rng.uniform(0.5, 1.5)
        out.append(np.vstack([np.zeros(space.d), np.cumsum(steps, axis=0)]))
    return out


POTS = [HardSphere(1.0), Strauss(1.0, 0.7), RadialTable((0.4, 1.0), (math.inf, 0.5))]


@pytest.mark.parametrize("p", POTS, ids=lambda p: p.kind)
def test_damping_prefix_property(p, plane, rng):
    for tup in _random_tuples(rng, p, plane, 3400, 5):
        assert cn.damping_weitz(p, plane, tup) <= cn.damping_weitz(p, plane, tup[1:])


@pytest.mark.parametrize("p", POTS, ids=lambda p: p.kind)
def test_chain_weight_rederivation(p, plane, rng):
    for tup in _random_tuples(rng, p, plane, 3400, 5):
        prod = 1.0
        for j in range(1, len(tup)):
            prod *= cn.damping_weitz(p, plane, tup[: j + 1]) * p.mayer(plane.distance(tup[j - 1], tup[j]))
        assert cn.chain_weight(p, plane, tup) == prod


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=2, max_size=7),
       st.floats(0.05, 5))
def test_chain_weight_bounded_by_mayer_product(pts, a):
    p, s = Strauss(1.0, a), Space(2)
    w = cn.chain_weight(p, s, pts)
    mayer = np.prod([p.mayer(s.distance(x, y)) for x, y in zip(pts, pts[1:])])
    assert 0.0 <= w <= mayer


def test_vk_k1_is_c_phi(plane):
    for p in POTS:
        e = cn.estimate_vk(p, plane, 1, 1000, seed=5)
        assert e.mean == p.temperedness_constant(plane) and e.std_error == 0.0 and e.exact


def test_vk_invalid(plane, hard_disk):
    with pytest.raises(InvalidK):
        cn.estimate_vk(hard_disk, plane, 0, 1000, 1)
    with pytest.raises(ValueError):
        cn.estimate_vk(hard_disk, plane, 2, 10, 1)


def test_vk_hard_disk_k2(plane, hard_disk):
    e = cn.estimate_vk(hard_disk, plane, 2, 10 ** 6, seed=11)
    assert e.mean / math.pi ** 2 == pytest.approx(0.7067, abs=0.002)
    assert abs(e.mean - cn.exact_v2_hard_disk(1.0)) <= 3 * e.std_error
    assert e.method is Method.MONTE_CARLO and not e.exact


def test_vk_bounded_by_c_phi_power(plane, hard_disk):
    c = math.pi
    for k in range(1, 9):
        e = cn.estimate_vk(hard_disk, plane, k, 10 ** 5, seed=k)
        assert e.mean <= c ** k + 3 * e.std_error


def test_vk_strauss_k2_matches_exact(plane, strauss1):
    e = cn.estimate_vk(strauss1, plane, 2, 10 ** 6, seed=7)
    assert abs(e.mean - cn.exact_v2_strauss(1.0, 1.0)) <= 3 * e.std_error


def test_submultiplicativity(plane, hard_disk):
    assert cn.exact_v2_hard_disk(1.0) <= math.pi ** 2
    est = {k: cn.estimate_vk(hard_disk, plane, k, 2 * 10 ** 5, seed=100 + k) for k in (1, 2, 4, 8, 16)}
    v2, v4 = est[2], est[4]
    se = math.hypot(v4.std_error, 2 * v2.mean * v2.std_error)
    assert v4.mean <= v2.mean ** 2 + 3 * se
    for k in (1, 2, 4, 8):
        a, b = est[2 * k], est[k]
        se = math.hypot(a.root_std_error, b.root_std_error)
        assert a.root <= b.root + 3 * se


@pytest.mark.parametrize("norm,cls", [(Norm.L2, HardSphere), (Norm.LINF, HardCube)])
@pytest.mark.parametrize("r", [2.0, 0.5])
def test_scale_covariance_is_exact(norm, cls, r):
    s = Space(2, norm)
    k = 4
    base = cn.estimate_vk(cls(1.0), s, k, 5000, seed=9)
    scaled = cn.estimate_vk(cls(r), s, k, 5000, seed=9)
    assert scaled.mean == r ** (2 * k) * base.mean
    assert scaled.std_error == r ** (2 * k) * base.std_error


def test_seed_determinism_and_worker_independence(plane, strauss1):
    n = 3 * 2 ** 16 + 123
    a = cn.estimate_vk(strauss1, plane, 3, n, seed=2024)
    b = cn.estimate_vk(strauss1, plane, 3, n, seed=2024)
    c = cn.estimate_vk(strauss1, plane, 3, n, seed=2024, workers=2)
    assert a == b == c
    assert cn.estimate_vk(strauss1, plane, 3, n, seed=2025) != a


def test_exact_hard_disk():
    v1 = cn.exact_v2_hard_disk(1.0)
    assert v1 == pytest.approx(6.9755, abs=5e-4)
    assert v1 / math.pi ** 2 == pytest.approx(HARD_DISK_RATIO, rel=1e-14)
    assert cn.exact_v2_hard_disk(2.0) == pytest.approx(16 * v1, rel=1e-14)
    assert abs(cn.v2_hard_disk_quadrature(1.0) - v1) <= 1e-9 * v1


def test_exact_strauss():
    hard = cn.exact_v2_hard_disk(1.0)
    assert cn.exact_v2_strauss(1.0, 50.0) == pytest.approx(hard, rel=1e-15)
    weak = cn.exact_v2_strauss(1.0, 0.01)
    c = Strauss(1.0, 0.01).temperedness_constant(Space(2))
    assert weak / c ** 2 == pytest.approx(1.0, abs=1e-2)
    with pytest.raises(ValueError):
        cn.exact_v2_strauss(1.0, 0.0)


def test_exact_strauss_weak_interaction_mc(plane):
    p = Strauss(1.0, 0.01)
    e = cn.estimate_vk(p, plane, 2, 10 ** 5, seed=1)
    assert abs(e.mean - cn.exact_v2_strauss(1.0, 0.01)) <= 3 * e.std_error + 1e-12


def test_dimension_bound():
    c2 = math.pi
    b2 = cn.v2_bound_dim_d(HardSphere(1.0), Space(2))
    assert b2.v2 == pytest.approx(c2 ** 2 * (1 - 1 / 64 + 1 / 256), rel=1e-15)
    b3 = cn.v2_bound_dim_d(HardSphere(1.0), Space(3))
    assert b3.v2 == pytest.approx((4 * math.pi / 3) ** 2 * (1 - 8.0 ** -3 + 16.0 ** -3), rel=1e-15)
    assert b3.delta == pytest.approx((1 - 8.0 ** -4) * 4 * math.pi / 3, rel=1e-15)
    bc = cn.v2_bound_dim_d(HardCube(0.5), Space(3, Norm.LINF))
    assert bc.v2 == pytest.approx(1 - 8.0 ** -3 + 16.0 ** -3, rel=1e-15)


def test_dimension_bound_respected_by_mc():
    s = Space(3)
    e = cn.estimate_vk(HardSphere(1.0), s, 2, 10 ** 6, seed=3)
    assert e.mean <= cn.v2_bound_dim_d(HardSphere(1.0), s).v2 + 3 * e.std_error
    sc = Space(3, Norm.LINF)
    e = cn.estimate_vk(HardCube(1.0), sc, 2, 10 ** 5, seed=3)
    assert e.mean <= cn.v2_bound_dim_d(HardCube(1.0), sc).v2 + 3 * e.std_error


def test_dimension_bound_mismatch():
    with pytest.raises(KindNormMismatch):
        cn.v2_bound_dim_d(HardSphere(1.0), Space(3, Norm.LINF))
    with pytest.raises(KindNormMismatch):
        cn.v2_bound_dim_d(HardCube(1.0), Space(3))
    with pytest.raises(KindNormMismatch):
        cn.v2_bound_dim_d(Strauss(1.0, 1.0), Space(3))


def test_delta_bound_examples(plane, hard_disk):
    exact = cn.exact_v2(hard_disk, plane)
    db = cn.delta_bound([exact])
    assert db.value == pytest.approx(0.8406 * math.pi, rel=1e-4)
    assert db.rigorous and db.k_used == 2
    v1 = cn.estimate_vk(hard_disk, plane, 1, 1000, seed=1)
    db1 = cn.delta_bound([v1])
    assert db1.value == math.pi and db1.rigorous
    v20 = cn.estimate_vk(hard_disk, plane, 20, 10 ** 6, seed=4)
    both = cn.delta_bound([exact, v20])
    assert both.k_used == 20 and not both.rigorous
    assert 0.58 <= both.ratio <= 0.66
    with pytest.raises(EmptyInput):
        cn.delta_bound([])


def test_delta_bound_clamped_to_c_phi(plane, hard_disk):
    noisy = VkEstimate(k=2, mean=9.5, std_error=5.0, n_samples=100, seed=1,
                       method=Method.MONTE_CARLO, c_phi=math.pi)
    db = cn.delta_bound([noisy])
    assert db.value == math.pi and db.rigorous


def test_thresholds(plane, hard_disk):
    th = cn.uniqueness_threshold(cn.delta_bound([cn.exact_v2(hard_disk, plane)]))
    assert th.times_c_phi == pytest.approx(3.2330, abs=5e-4)
    assert th.rigorous
    db = cn.delta_bound([cn.estimate_vk(hard_disk, plane, 1, 1000, seed=1)])
    assert cn.uniqueness_threshold(db).value == pytest.approx(math.e / math.pi, rel=1e-15)
    ths = cn.uniqueness_threshold(cn.delta_bound([cn.exact_v2(Strauss(1.0, 1.0), plane)]))
    assert ths.value == pytest.approx(math.e / math.sqrt(cn.exact_v2_strauss(1.0, 1.0)), rel=1e-14)


def test_estimate_record_schema(plane, hard_disk):
    d = cn.estimate_vk(hard_disk, plane, 2, 1000, seed=1).to_dict()
    for key in ("k", "mean", "std_error", "n_samples", "seed", "method", "c_phi", "delta_root",
                "wall_seconds"):
        assert key in d
    assert d["method"] == "MonteCarlo"
    exact = cn.exact_v2(hard_disk, plane)
    assert exact.std_error == 0 and exact.exact and exact.method is Method.EXACT_LENS
