import math

import numpy as np
import pytest
from conftest import disc_points
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dirichlet_wco.moebius import (
    ELLIPTIC,
    HYPERBOLIC,
    IDENTITY,
    PARABOLIC,
    Moebius,
    classify,
    conjugate_to_canonical,
    derivative_sup,
    fixed_points,
    hyperbolic_normal_form,
    iterate,
    parabolic_normal_form,
    rational_rotation,
)

p_mod = st.floats(0.0, 0.97)
angles = st.floats(-math.pi + 1e-6, math.pi)


def auto(r, arg, theta):
    return Moebius.from_p_theta(r * np.exp(1j * arg), theta)


def test_normalisation_and_equality():
    m = Moebius(2, 0, 0, 0.5)
    assert abs(m.a * m.d - m.b * m.c - 1) < 1e-15
    assert Moebius(1, 2, 3, 7) == Moebius(-2, -4, -6, -14)
    with pytest.raises(ValueError):
        Moebius(1, 2, 2, 4)


def test_from_p_theta_formula():
    p, th = 0.3 - 0.4j, 1.1
    m = Moebius.from_p_theta(p, th)
    z = np.array([0.1, -0.5j, 0.7 + 0.1j])
    np.testing.assert_allclose(m(z), np.exp(1j * th) * (p - z) / (1 - np.conj(p) * z), atol=1e-14)
    q, t = m.to_p_theta()
    assert abs(q - p) < 1e-14 and abs(t - th) < 1e-14
    assert m.is_automorphism()
    with pytest.raises(ValueError):
        Moebius.from_p_theta(1.1, 0.0)


def test_composition_order():
    f, g = Moebius.rotation(0.5), Moebius.from_p_theta(0.2, 0.0)
    z = 0.3 + 0.1j
    assert abs((f @ g)(z) - f(g(z))) < 1e-14
    assert (f @ f.inverse()).is_identity()


def test_self_map_checks():
    half = Moebius(-1, 1, 0, 2)
    assert half.is_self_map() and not half.is_automorphism()
    assert not Moebius(2, 0, 0, 1).is_self_map()


# classify ------------------------------------------------------------------


def test_classify_examples():
    c = classify(Moebius.from_p_theta(0, math.pi / 2))
    assert c.kind == ELLIPTIC and abs(c.fixed_points[0]) < 1e-15 and not np.isfinite(c.fixed_points[1])
    c = classify(Moebius.from_p_theta(math.sqrt(2) / 2, math.pi / 2))
    assert c.kind == PARABOLIC and c.in_band and len(c.fixed_points) == 1
    assert abs(abs(c.fixed_points[0]) - 1) < 1e-9
    c = classify(Moebius.from_p_theta(0.9, math.pi / 2))
    assert c.kind == HYPERBOLIC and len(c.fixed_points) == 2
    assert all(abs(abs(z) - 1) < 1e-9 for z in c.fixed_points)
    assert classify(Moebius.identity()).kind == IDENTITY


def test_classify_rejects_non_automorphism():
    with pytest.raises(ValueError):
        classify(Moebius(-1, 1, 0, 2))


@settings(max_examples=200, deadline=None)
@given(p_mod, st.floats(0, 2 * math.pi), angles)
def test_classify_trichotomy(r, arg, theta):
    m = auto(r, arg, theta)
    gap = r - math.cos(theta / 2)
    assume(not m.is_identity())
    c = classify(m)
    if abs(gap) <= 1e-9:
        assert c.kind == PARABOLIC
    elif gap > 0:
        assert c.kind == HYPERBOLIC
    else:
        assert c.kind == ELLIPTIC
    for z in c.fixed_points:
        if np.isfinite(z):
            assert abs(m(z) - z) < 1e-7 * (1 + abs(z))


def test_classify_normal_forms():
    c = classify(parabolic_normal_form(1.0, 1))
    assert c.kind == PARABOLIC and abs(c.fixed_points[0] + 1) < 1e-12 and abs(c.multiplier - 1) < 1e-12
    c = classify(hyperbolic_normal_form(0.5, 1))
    assert c.kind == HYPERBOLIC and abs(c.multiplier - 0.5) < 1e-12
    assert abs(c.fixed_points[0] - 1) < 1e-12 and abs(c.fixed_points[1] + 1) < 1e-12


def test_rational_rotation_detection():
    assert rational_rotation(2 * math.pi / 3) == (1, 3)
    assert rational_rotation(-2 * math.pi / 5) == (4, 5)
    assert rational_rotation(2 * math.pi * (math.sqrt(2) - 1)) is None
    assert rational_rotation(2 * math.pi / 65) is None
    c = classify(Moebius.rotation(2 * math.pi / 3))
    assert c.rotation_fraction == (1, 3) and c.period == 3


# iterate & normal forms ----------------------------------------------------------


def test_iterate_basic():
    m = auto(0.4, 1.0, 0.3)
    assert iterate(m, 0).is_identity()
    assert iterate(m, 1).normalized_close(m)
    assert iterate(Moebius.rotation(0.3), 7).normalized_close(Moebius.rotation(2.1))


def test_parabolic_normal_form_examples():
    m = parabolic_normal_form(1.0, 1)
    assert abs(m(-1.0) + 1) < 1e-15
    assert abs(m(0.0) - (-1j / (2 + 1j))) < 1e-15
    assert iterate(m, 2).normalized_close(parabolic_normal_form(1.0, 2))
    assert iterate(parabolic_normal_form(2.0, 1), 3).normalized_close(parabolic_normal_form(2.0, 3))


def test_hyperbolic_normal_form_examples():
    m = hyperbolic_normal_form(0.5, 1)
    assert abs(m(1.0) - 1) < 1e-15
    assert abs(m(0.0) - 1 / 3) < 1e-15
    assert iterate(m, 4).normalized_close(hyperbolic_normal_form(0.5, 4))


@pytest.mark.parametrize("n", [1, 5, 17, 64])
def test_closed_forms_pointwise(n):
    z = 0.95 * np.exp(2j * np.pi * np.arange(16) / 16)
    for y in (0.5, 1.0, -2.0):
        np.testing.assert_allclose(iterate(parabolic_normal_form(y, 1), n)(z), parabolic_normal_form(y, n)(z), atol=1e-12)
    for mu in (0.3, 0.5, 0.9):
        np.testing.assert_allclose(iterate(hyperbolic_normal_form(mu, 1), n)(z), hyperbolic_normal_form(mu, n)(z), atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(p_mod, st.floats(0, 2 * math.pi), angles, st.integers(1, 12))
def test_iterate_preserves_kind(r, arg, theta, n):
    m = auto(r, arg, theta)
    gap = r - math.cos(theta / 2)
    assume(abs(gap) > 1e-3)
    c = classify(m)
    assume(c.kind != ELLIPTIC or c.period is None or n % c.period != 0)
    if c.kind == ELLIPTIC:
        # the iterate may sit close to the identity; only check it is not hyperbolic
        assume(abs(math.remainder(n * c.multiplier, 2 * math.pi)) > 1e-3)
    cn = classify(iterate(m, n))
    assert cn.kind == c.kind
    if c.kind == HYPERBOLIC:
        for z in c.fixed_points:
            assert min(abs(z - w) for w in cn.fixed_points) < 1e-9


def test_parabolic_iterate_fixed_point():
    m = Moebius.from_p_theta(math.sqrt(2) / 2, math.pi / 2)
    c = classify(m)
    for n in (2, 5, 11):
        cn = classify(iterate(m, n), tol=1e-7)
        assert cn.kind == PARABOLIC and abs(cn.fixed_points[0] - c.fixed_points[0]) < 1e-9


# derivative bounds -------------------------------------------------------------


def test_derivative_sup_examples():
    assert derivative_sup(Moebius.identity()) == pytest.approx(1.0)
    assert derivative_sup(Moebius.from_p_theta(0, 0)) == pytest.approx(1.0)
    for n in (1, 5, 40):
        assert derivative_sup(iterate(Moebius.rotation(1.3), n)) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 0.9), st.floats(0, 2 * math.pi), angles)
def test_derivative_sup_vs_grid(r, arg, theta):
    m = auto(r, arg, theta)
    z = np.exp(2j * np.pi * np.arange(1 << 14) / (1 << 14))
    grid = np.max(np.abs(m.derivative(z)))
    s = derivative_sup(m)
    assert grid <= s * (1 + 1e-9)
    assert grid >= s * (1 - 1e-3)


def test_parabolic_growth_is_quadratic():
    # closed form: sup|phi_n'| = ((n|y| + sqrt(4 + n^2 y^2)) / 2)^2, roughly n^2 y^2 + 2
    for y in (0.5, 1.0, 3.0):
        for n in (1, 16, 256, 4096):
            t = (n * y) ** 2
            expect = ((math.sqrt(t) + math.sqrt(4 + t)) / 2) ** 2
            assert derivative_sup(parabolic_normal_form(y, n)) == pytest.approx(expect, rel=1e-9)
            if n >= 16:
                assert 1.0 <= derivative_sup(parabolic_normal_form(y, n)) / t <= 1.1


def test_hyperbolic_growth_exact():
    for j in range(1, 41):
        assert derivative_sup(hyperbolic_normal_form(0.5, j)) * 0.5**j == pytest.approx(1.0, rel=1e-9)


# canonical forms -------------------------------------------------------------


def test_conjugate_examples():
    canon, g = conjugate_to_canonical(Moebius.rotation(0.7))
    assert g.is_identity() and canon.normalized_close(Moebius.rotation(0.7))
    canon, g = conjugate_to_canonical(hyperbolic_normal_form(0.5, 1))
    assert g.is_identity(1e-12) and canon.normalized_close(hyperbolic_normal_form(0.5, 1))


def test_conjugate_random_elliptic():
    a = 0.3 + 0.2j
    g = Moebius(1, a, np.conj(a), 1)
    m = g @ Moebius.rotation(1.234) @ g.inverse()
    canon, h = conjugate_to_canonical(m)
    z = 0.9 * np.exp(2j * np.pi * np.arange(16) / 16)
    np.testing.assert_allclose((h.inverse() @ m @ h)(z), canon(z), atol=1e-10)
    assert canon.normalized_close(Moebius.rotation(1.234), 1e-10)


@settings(max_examples=50, deadline=None)
@given(p_mod, st.floats(0, 2 * math.pi), angles)
def test_conjugate_property(r, arg, theta):
    m = auto(r, arg, theta)
    assume(not m.is_identity(1e-9) and abs(r - math.cos(theta / 2)) > 1e-6)
    canon, g = conjugate_to_canonical(m)
    z = 0.9 * np.exp(2j * np.pi * np.arange(16) / 16)
    np.testing.assert_allclose((g.inverse() @ m @ g)(z), canon(z), atol=1e-10)


def test_fixed_points_of_translation_like_map():
    assert fixed_points(Moebius.identity()) == ()
