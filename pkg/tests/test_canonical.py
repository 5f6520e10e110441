import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from lowerspec.canonical import CanonicalPair, reconstruct, reduce
from lowerspec.errors import IllConditioned, NotInDomain
from lowerspec.mat2 import Matrix2, rotation


def _close(m1: Matrix2, m2: Matrix2, tol: float) -> bool:
    scale = max(1.0, m2.frobenius())
    return (m1 - m2).frobenius() <= tol * scale


def test_reduce_scaled_rotation():
    c = reduce(Matrix2(1, 1, 0, 0), rotation(math.pi / 3) * 2.0)
    assert c.gamma == pytest.approx(2.0, abs=1e-12)
    assert c.lam == pytest.approx(0.5, abs=1e-12)
    assert c.alpha == pytest.approx(0.5, abs=1e-12)
    assert c.theta == pytest.approx(math.pi / 3, abs=1e-12)
    assert np.allclose(c.basis.to_array(), np.eye(2), atol=1e-12)


def test_reduce_already_canonical():
    c = reduce(Matrix2(1, 0, 0, 0), rotation(math.pi / 4))
    assert (c.gamma, c.lam, c.alpha) == pytest.approx((1, 1, 0), abs=1e-12)
    assert c.theta == pytest.approx(math.pi / 4, abs=1e-12)


def test_reconstruct_examples():
    h, r = reconstruct(CanonicalPair.from_params(1, 1, 0, math.pi / 2))
    assert np.allclose(h.to_array(), [[1, 0], [0, 0]])
    assert np.allclose(r.to_array(), [[0, -1], [1, 0]], atol=1e-15)
    h, r = reconstruct(CanonicalPair.from_params(2, 0.5, 0.5, math.pi / 3))
    assert np.allclose(h.to_array(), [[1, 1], [0, 0]])
    assert np.allclose(r.to_array(), (rotation(math.pi / 3) * 2.0).to_array())


def test_random_conjugate_recovers_parameters(rng):
    for _ in range(100):
        gamma, lam = rng.uniform(0.2, 3), rng.uniform(-2, 2)
        alpha, theta = rng.uniform(-2, 2), rng.uniform(0.1, math.pi - 0.1)
        a = Matrix2(*rng.normal(size=4))
        if abs(a.det) < 0.2 or abs(lam) < 0.05:
            continue
        a_inv = a.inverse()
        h = (a @ Matrix2(lam, alpha, 0, 0) @ a_inv) * gamma
        r = (a @ rotation(theta) @ a_inv) * gamma
        c = reduce(h, r)
        assert (c.gamma, c.lam, c.alpha, c.theta) == pytest.approx((gamma, lam, alpha, theta), abs=1e-8)


@given(st.floats(0.2, 3), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 3.09),
       st.lists(st.floats(-2, 2), min_size=4, max_size=4))
def test_round_trip_property(gamma, lam, alpha, theta, entries):
    assume(abs(lam) > 0.05)
    a = Matrix2(*entries)
    assume(abs(a.det) > 0.2)
    h = (a @ Matrix2(lam, alpha, 0, 0) @ a.inverse()) * gamma
    r = (a @ rotation(theta) @ a.inverse()) * gamma
    c = reduce(h, r)
    h2, r2 = reconstruct(c)
    assert _close(h2, h, 1e-9) and _close(r2, r, 1e-9)
    assert c.gamma == pytest.approx(math.sqrt(r.det), rel=1e-10)
    assert c.lam == pytest.approx(h.trace / c.gamma, rel=1e-10, abs=1e-10)


def test_reflected_rotation_maps_into_upper_half():
    # rot(-theta) is conjugate to rot(theta) by a reflection
    c = reduce(Matrix2(1, 0.3, 0, 0), rotation(-1.0))
    assert c.theta == pytest.approx(1.0)
    h2, r2 = reconstruct(c)
    assert _close(r2, rotation(-1.0), 1e-12)


def test_json_round_trip():
    c = reduce(Matrix2(1, 1, 0, 0), rotation(0.7) * 1.5)
    c2 = CanonicalPair.from_json(c.to_json())
    assert c2.to_json() == c.to_json()


def test_domain_errors():
    with pytest.raises(NotInDomain):
        reduce(Matrix2(0, 1, 0, 0), rotation(1.0))  # nilpotent
    with pytest.raises(NotInDomain):
        reduce(Matrix2(1, 0, 0, 0), Matrix2(2, 0, 0, 3))  # real eigenvalues
    with pytest.raises(NotInDomain):
        reduce(Matrix2(1, 0, 0, 1), rotation(1.0))  # rank two


def test_ill_conditioned_basis():
    # a nearly singular conjugator shows up as a badly conditioned canonical basis
    a = Matrix2(1, 1, 0, 1e-5)
    h = a @ Matrix2(1, 0, 0, 0) @ a.inverse()
    r = a @ rotation(1.0) @ a.inverse()
    assert reduce(h, r).theta == pytest.approx(1.0)
    with pytest.raises(IllConditioned):
        reduce(h, r, max_condition=1e4)
