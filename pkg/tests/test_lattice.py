import cmath
import math

import pytest
from hypothesis import assume, given, strategies as st

from tori.contfrac import UnimodularMatrix
from tori.errors import DegenerateError, InvalidInput
from tori.lattice import (
    S,
    T,
    Lattice,
    Modulus,
    apply_automorphism,
    in_fundamental_domain,
    isomorphic,
    modulus,
    reduce,
)

HEX = cmath.exp(1j * math.pi / 3)

taus = st.builds(complex, st.floats(-20, 20), st.floats(0.05, 20))


def _word(letters):
    m = UnimodularMatrix.identity()
    for k in letters:
        m = m @ (S if k == 0 else UnimodularMatrix(1, k, 0, 1))
    return m


sl2 = st.lists(st.integers(-3, 3), max_size=6).map(_word)
gl2 = st.tuples(sl2, st.booleans()).map(lambda t: t[0] @ UnimodularMatrix(0, 1, 1, 0) if t[1] else t[0])


def test_modulus_examples():
    assert modulus(Lattice(1, 1j)).tau == 1j
    assert modulus(Lattice(2, 2j + 2)).tau == pytest.approx(1 + 1j)
    assert modulus(Lattice(1, -1j)).tau == pytest.approx(1j)


def test_collinear_rejected():
    with pytest.raises(DegenerateError):
        Lattice(1, 2)
    with pytest.raises(InvalidInput):
        Modulus(1 - 1j)


def test_reduce_examples():
    r = reduce(5 + 1j)
    assert r.modulus.tau == 1j and r.matrix == UnimodularMatrix(1, -5, 0, 1)
    assert reduce(0.5j).modulus.tau == pytest.approx(2j)
    r = reduce(2.3 + 0.1j)
    assert abs(r.modulus.tau) >= 1
    assert in_fundamental_domain(r.modulus.tau)
    assert r.matrix.act(2.3 + 0.1j) == pytest.approx(r.modulus.tau, rel=1e-12)


def test_boundary_convention():
    # |tau| = 1 with Re > 0 maps to the mirror point with Re < 0
    t = cmath.exp(1j * math.pi / 3)
    assert reduce(t).modulus.tau == pytest.approx(cmath.exp(2j * math.pi / 3))
    assert reduce(0.5 + 2j).modulus.tau == pytest.approx(-0.5 + 2j)
    assert in_fundamental_domain(-0.5 + 2j) and not in_fundamental_domain(0.5 + 2j)


@given(taus)
def test_reduce_properties(tau):
    r = reduce(tau)
    assert r.matrix.det == 1
    assert in_fundamental_domain(r.modulus.tau, 1e-9)
    assert abs(r.matrix.act(tau) - r.modulus.tau) <= 1e-9 * max(1.0, abs(r.modulus.tau))
    again = reduce(r.modulus)
    assert again.modulus == r.modulus and again.matrix == UnimodularMatrix.identity()


def test_isomorphic_examples():
    assert isomorphic(1j, 5 + 1j) is not None
    assert isomorphic(1j, 2j) is None
    w = isomorphic(0.3 + 1.7j, 0.3 + 1.7j)
    assert w.matrix == UnimodularMatrix.identity() and w.branch == "sl2"


@given(taus, sl2)
def test_isomorphic_orbit(tau, m):
    image = m.act(tau)
    assume(image.imag > 1e-3 and abs(image) < 1e3)
    w = isomorphic(tau, image)
    assert w is not None
    assert abs(w.matrix.act(tau) - image) <= 1e-7 * max(1.0, abs(image))


@given(taus)
def test_isomorphic_mirror_branch(tau):
    r = reduce(tau).modulus.tau
    # points on the boundary or the imaginary axis are their own mirror images
    assume(1e-6 < abs(r.real) < 0.5 - 1e-6 and abs(abs(r) - 1) > 1e-6)
    w = isomorphic(tau, -tau.conjugate())
    assert w is not None and w.matrix.det == -1
    assert abs(w.matrix.act(tau.conjugate()) - (-tau.conjugate())) < 1e-7 * max(1.0, abs(tau))


@given(taus, taus, taus)
def test_isomorphic_equivalence_relation(a, b, c):
    ab, bc, ac = isomorphic(a, b), isomorphic(b, c), isomorphic(a, c)
    assert (ab is None) == (isomorphic(b, a) is None)
    if ab is not None and bc is not None:
        assert ac is not None
    assert isomorphic(a, a) is not None


def test_apply_automorphism_examples():
    sq = Lattice(1, 1j)
    assert apply_automorphism(sq, UnimodularMatrix.identity()) == sq
    assert apply_automorphism(sq, T) == Lattice(1 + 1j, 1j)
    tau = 0.2 + 1.3j
    assert apply_automorphism(Lattice(1, tau), UnimodularMatrix(0, 1, 1, 0)) == Lattice(tau, 1)
    with pytest.raises(InvalidInput):
        UnimodularMatrix(2, 0, 0, 1)


def _points(lattice, radius, span=40):
    return {
        (round(p.real, 6), round(p.imag, 6))
        for m in range(-span, span + 1)
        for n in range(-span, span + 1)
        if abs(p := lattice.point(m, n)) <= radius
    }


@pytest.mark.parametrize("m", [T, S, UnimodularMatrix(2, 1, 1, 1), UnimodularMatrix(1, 0, 3, -1)])
def test_apply_automorphism_same_points(m):
    lat = Lattice(1, 0.3 + 1.1j)
    new = apply_automorphism(lat, m)
    for x, y in _points(new, 10):
        assert lat.contains(complex(x, y), 1e-6)
    for x, y in _points(lat, 10):
        assert new.contains(complex(x, y), 1e-6)


@given(taus, gl2)
def test_modulus_of_automorphism_is_isomorphic(tau, m):
    lat = apply_automorphism(Lattice(1, tau), m)
    assert isomorphic(modulus(lat), tau, 1e-7) is not None


def test_hexagonal_reduces_to_corner():
    assert reduce(HEX).modulus.tau == pytest.approx(HEX * HEX)
