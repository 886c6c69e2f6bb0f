import math
import random

import pytest

from tori.contfrac import ContinuedFraction, UnimodularMatrix, mobius_apply
from tori.errors import DegenerateError, InvalidInput
from tori.nctorus import (
    NcTorus,
    StateScale,
    default_family,
    dimension_group_step,
    geometric_family,
    morita_equivalent,
    parse_family,
    scale_action,
    v_map,
)
from tori.surd import QuadraticIrrational

R2 = QuadraticIrrational.sqrt(2)
GOLDEN = QuadraticIrrational(1, 1, 2, 5)


def test_morita_examples():
    w = morita_equivalent(NcTorus.from_surd(R2), NcTorus.from_surd(1 + R2))
    assert w is not None and w.exact
    assert mobius_apply(w.matrix, R2) == 1 + R2
    assert morita_equivalent(NcTorus.from_surd(GOLDEN), NcTorus.from_surd(R2)) is None
    same = morita_equivalent(NcTorus.from_surd(GOLDEN), NcTorus.from_surd(GOLDEN))
    assert same.shift == 0 and same.matrix == UnimodularMatrix.identity()


def test_morita_random_soundness():
    rng = random.Random(7)
    for _ in range(60):
        theta = QuadraticIrrational(rng.randint(-20, 20), rng.randint(1, 6), rng.randint(1, 9), rng.choice([2, 3, 5, 7, 11]))
        while True:
            a, b, c, d = (rng.randint(-10, 10) for _ in range(4))
            if abs(a * d - b * c) == 1 and c * theta + d != 0:
                break
        image = mobius_apply(UnimodularMatrix(a, b, c, d), theta)
        w = morita_equivalent(NcTorus.from_surd(theta), NcTorus.from_surd(image))
        assert w is not None and w.exact
        assert mobius_apply(w.matrix, theta) == image


def test_morita_heuristic_on_floats():
    theta = math.sqrt(7)
    t1 = NcTorus.from_real(theta)
    t2 = NcTorus.from_real((2 * theta + 1) / (theta + 1))
    w = morita_equivalent(t1, t2, depth=15)
    assert w is not None and not w.exact and w.mode == "heuristic"
    assert w.matrix.act(theta) == pytest.approx((2 * theta + 1) / (theta + 1), rel=1e-9)


def test_from_real_rejects_rational():
    with pytest.raises(DegenerateError):
        NcTorus.from_real(0.375)


def test_from_cf_periodic_is_exact():
    t = NcTorus.from_cf(ContinuedFraction(1, (), (2,)))
    assert t.exact and t.theta == R2


def test_dimension_group_examples():
    golden = NcTorus.from_surd(GOLDEN)
    assert dimension_group_step(golden, 1) == UnimodularMatrix(2, 1, 1, 1)
    assert dimension_group_step(NcTorus.from_surd(R2), 2) == UnimodularMatrix(7, 3, 5, 2)
    t = NcTorus.from_surd(QuadraticIrrational(5, 1, 1, 3))
    assert dimension_group_step(t, 0) == UnimodularMatrix(t.cf.a0, 1, 1, 0)


def test_v_map_examples():
    vals = v_map(NcTorus.from_surd(GOLDEN), StateScale(1.0), 2)
    assert vals == pytest.approx([0.0, math.log(3), math.log(4)])
    vals = v_map(NcTorus.from_surd(R2), StateScale(1.0), 2)
    assert vals == pytest.approx([0.0, math.log(4), math.log(9)])


def test_v_map_families():
    t = NcTorus.from_surd(R2)
    a = v_map(t, StateScale(2.0), 3, default_family)
    b = v_map(t, StateScale(2.0), 3, geometric_family(0.5))
    assert a == pytest.approx([2 * v for v in v_map(t, StateScale(1.0), 3)])
    assert b == pytest.approx([v * 0.5**k for k, v in enumerate(a)])
    assert parse_family("geometric:0.5")(3, 2.0) == pytest.approx(0.25)
    with pytest.raises(InvalidInput):
        parse_family("cubic")
    with pytest.raises(InvalidInput):
        geometric_family(0)


def test_v_map_monotone_in_omega():
    t = NcTorus.from_surd(GOLDEN)
    lo, hi = v_map(t, StateScale(1.0), 6), v_map(t, StateScale(3.0), 6)
    assert all(h >= l for l, h in zip(lo, hi))


def test_scale_action_examples():
    t = NcTorus.from_surd(GOLDEN)
    s = StateScale(1.0)
    assert scale_action(s, UnimodularMatrix.identity(), t) == s
    assert scale_action(s, UnimodularMatrix(1, 1, 0, 1), t) == s
    assert scale_action(s, UnimodularMatrix(0, 1, 1, 0), t).omega == pytest.approx(1.618, abs=1e-3)


def test_state_scale_positive():
    with pytest.raises(InvalidInput):
        StateScale(0.0)
