import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lowerspec.mat2 import (Matrix2, Membership, classify_membership, condition_number, diag,
                            op_norm, rotation, spectral_radius)

finite = st.floats(-10, 10, allow_nan=False)


def test_spectral_radius_trivial():
    assert spectral_radius(Matrix2.identity()) == 1.0
    assert spectral_radius(Matrix2(0, 1, 0, 0)) == 0.0


def test_spectral_radius_complex_pair():
    assert spectral_radius(rotation(0.3) * 2.0) == pytest.approx(2.0)


def test_spectral_radius_product_matches_numpy():
    m = Matrix2(1, 1, 0, 1) @ rotation(math.pi / 3)
    assert spectral_radius(m) == pytest.approx(max(abs(np.linalg.eigvals(m.to_array()))), rel=1e-12)


def test_spectral_radius_random_conjugates(rng):
    # conjugation leaves the spectrum alone
    h = Matrix2(1.3, -0.4, 0, 0)
    for _ in range(50):
        a = Matrix2(*rng.normal(size=4))
        if abs(a.det) < 0.1:
            continue
        m = a @ h @ a.inverse()
        assert spectral_radius(m) == pytest.approx(1.3, rel=1e-8)


def test_op_norm_examples():
    assert op_norm(diag(3, 4)) == 4.0
    assert op_norm(Matrix2(0, 0, 0, 0)) == 0.0
    assert op_norm(Matrix2(1, 1, 0, 1)) == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-12)


def test_op_norm_orthogonal_no_cancellation():
    # the f^2 - 4 det^2 form returns 1 + O(1e-8) here
    for t in np.linspace(0.1, 3.0, 50):
        assert abs(op_norm(rotation(t)) - 1.0) < 1e-15
        assert abs(op_norm(rotation(t).power(7)) - 1.0) < 1e-14


@given(finite, finite, finite, finite, finite, finite, finite, finite)
def test_op_norm_submultiplicative(a, b, c, d, e, f, g, h):
    x, y = Matrix2(a, b, c, d), Matrix2(e, f, g, h)
    assert op_norm(x @ y) <= op_norm(x) * op_norm(y) * (1 + 1e-12) + 1e-300


def test_op_norm_grid_oracle():
    m = Matrix2(1, 1, 0, 1)
    t = np.linspace(0, 2 * math.pi, 200_001)
    v = np.stack([np.cos(t), np.sin(t)])
    best = np.linalg.norm(m.to_array() @ v, axis=0).max()
    assert op_norm(m) == pytest.approx(best, rel=1e-9)


@given(finite, finite, finite, finite)
def test_op_norm_matches_svd(a, b, c, d):
    m = Matrix2(a, b, c, d)
    expected = np.linalg.svd(m.to_array(), compute_uv=False)[0]
    assert op_norm(m) == pytest.approx(expected, rel=1e-7, abs=1e-7)
    assert spectral_radius(m) <= op_norm(m) * (1 + 1e-9) + 1e-9


def test_rotation_examples():
    assert rotation(0.0) == Matrix2.identity()
    r = rotation(math.pi / 2)
    assert np.allclose(r.to_array(), [[0, -1], [1, 0]], atol=1e-16)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_rotation_homomorphism(a, b):
    assert np.allclose((rotation(a) @ rotation(b)).to_array(), rotation(a + b).to_array(), atol=1e-12)


def test_membership_examples():
    assert classify_membership(Matrix2(1, 2, 0, 0)).kind is Membership.IN_P
    res = classify_membership(Matrix2(0, 1, 0, 0))
    assert res.kind is Membership.NEITHER
    assert classify_membership(rotation(math.pi / 3)).kind is Membership.IN_E
    assert classify_membership(diag(2, 3)).kind is Membership.NEITHER


def test_condition_number():
    assert condition_number(Matrix2.identity()) == pytest.approx(1.0)
    assert condition_number(diag(1, 1e-3)) == pytest.approx(1e3)
    assert condition_number(Matrix2(1, 1, 1, 1)) == math.inf
