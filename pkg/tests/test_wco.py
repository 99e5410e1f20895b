import math

import numpy as np
import pytest
from conftest import rand_series
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_wco.moebius import Moebius, hyperbolic_normal_form, iterate, parabolic_normal_form
from dirichlet_wco.series import Series, Symbol, ps_eval, ps_mul
from dirichlet_wco.spaces import DIRICHLET, HARDY, seq_norm
from dirichlet_wco.wco import (
    Compression,
    Wco,
    apply,
    check_invertible,
    compress,
    inverse,
    op_norm,
    power,
    symbol_iterate,
    weight_iterate,
)

HALF = Moebius(-1, 1, 0, 2)


def test_self_map_check():
    with pytest.raises(ValueError):
        Wco(1.0, Moebius(2, 0, 0, 1))
    with pytest.raises(ValueError):
        Wco(1.0, Series([0, 1.5]))
    W = Wco(1.0, Series([0.5, 0.4]))
    assert not W.is_moebius


def test_apply_composition_operator(rng):
    f = rand_series(rng, 12)
    m = Moebius.from_p_theta(0.3 + 0.2j, 0.7)
    out = apply(Wco(1.0, m), f, 60)
    z = 0.4 * np.exp(2j * np.pi * np.arange(16) / 16)
    np.testing.assert_allclose(ps_eval(out, z), ps_eval(f, m(z)), atol=1e-10)


def test_apply_identity_is_multiplication(rng):
    f, u = rand_series(rng, 10), rand_series(rng, 5)
    out = apply(Wco(u, Moebius.identity()), f, 15)
    np.testing.assert_allclose(out.coeffs, ps_mul(u, f, 15).coeffs, atol=1e-12)


def test_apply_worked_example():
    # (1 - z)^2 * (1 - z)/2 = (1 - 3z + 3z^2 - z^3)/2
    out = apply(Wco(Symbol.polynomial([1, -2, 1]), HALF), Series([0, 1]), 6)
    np.testing.assert_allclose(out.coeffs, [0.5, -1.5, 1.5, -0.5, 0, 0, 0], atol=1e-15)


def test_apply_sample_method_agrees(rng):
    f = rand_series(rng, 8)
    W = Wco(Symbol.rational([2, 1], [2]), Moebius.from_p_theta(0.2j, 1.0))
    np.testing.assert_allclose(apply(W, f, 24).coeffs, apply(W, f, 24, method="sample").coeffs, atol=1e-9)
    with pytest.raises(ValueError):
        apply(W, f, 4, method="magic")


def test_apply_series_phi(rng):
    f = rand_series(rng, 6)
    phi = Series([0.3, 0.5, 0.1])
    out = apply(Wco(Series([1, 1]), phi), f, 30)
    z = 0.5 * np.exp(2j * np.pi * np.arange(8) / 8)
    np.testing.assert_allclose(ps_eval(out, z), (1 + z) * ps_eval(f, ps_eval(phi, z)), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**16))
def test_apply_linear(alpha, beta, seed):
    rng = np.random.default_rng(seed)
    f, g = rand_series(rng, 10), rand_series(rng, 10)
    W = Wco(Symbol.polynomial([2, 1]), Moebius.from_p_theta(0.3, 0.4))
    lhs = apply(W, Series(alpha * f.coeffs + beta * g.coeffs), 40).coeffs
    rhs = alpha * apply(W, f, 40).coeffs + beta * apply(W, g, 40).coeffs
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * (1 + abs(alpha) + abs(beta)) * 10


# cocycle & powers ------------------------------------------------------------


def test_weight_iterate_examples():
    m = Moebius.rotation(2 * math.pi / 3)
    np.testing.assert_allclose(weight_iterate([2, 1], m, 0, 6).coeffs, np.eye(7)[0])
    np.testing.assert_allclose(weight_iterate(3.0, m, 4, 5).coeffs, [81, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(weight_iterate([2, 1], m, 3, 8).coeffs, [8, 0, 0, 1, 0, 0, 0, 0, 0], atol=1e-12)


@pytest.mark.parametrize("phi", [parabolic_normal_form(1.0), hyperbolic_normal_form(0.5), Moebius.from_p_theta(0.3j, 2.0)])
def test_cocycle_law(phi):
    h = Symbol.rational([2, 1], [2])
    z = 0.9 * np.exp(2j * np.pi * np.arange(32) / 32)
    for m, n in [(1, 1), (3, 5), (16, 16), (7, 2)]:
        lhs = symbol_iterate(h, phi, m + n)(z)
        rhs = symbol_iterate(h, phi, m)(z) * symbol_iterate(h, phi, n).compose(iterate(phi, m))(z)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-9)


def test_power_examples(rng):
    W = Wco(Symbol.polynomial([2, 1]), Moebius.from_p_theta(0.2, 0.5))
    assert power(W, 1) is W
    P0 = power(W, 0)
    assert P0.phi.is_identity() and P0.u.is_constant and P0.u(0.3) == 1
    f = rand_series(rng, 10)
    a = apply(power(W, 3), f, 80).coeffs
    b = apply(W, apply(W, apply(W, f, 80), 80), 80).coeffs
    assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(a)


# compressions ---------------------------------------------------------------


def test_compress_identity():
    C = compress(Wco.identity(), DIRICHLET, 10)
    assert isinstance(C, Compression)
    np.testing.assert_array_equal(C.matrix, np.eye(11))
    assert op_norm(C) == pytest.approx(1.0)


def test_compress_rotation_is_triangular():
    theta = 0.7
    C = compress(Wco(Symbol.polynomial([2, 1, 0.5]), Moebius.rotation(theta)), DIRICHLET, 30).matrix
    assert not np.any(np.triu(C, 1))
    np.testing.assert_allclose(np.diag(C), 2 * np.exp(1j * theta * np.arange(31)), atol=1e-13)


def test_compress_shift():
    C = compress(Wco(Series([0, 1]), Moebius.identity()), DIRICHLET, 12).matrix
    k = np.arange(12)
    np.testing.assert_allclose(np.diag(C, -1), np.sqrt((k + 2) / (k + 1)), atol=1e-14)


def test_compress_columns_match_apply(rng):
    W = Wco(Symbol.rational([1, 0.5], [1, -0.2]), Moebius.from_p_theta(0.4 - 0.1j, -1.2))
    N = 20
    C = compress(W, HARDY, N).matrix
    for k in (0, 3, 11):
        np.testing.assert_allclose(C[:, k], apply(W, Series.monomial(k, N), N).coeffs, atol=1e-12)


def test_op_norm_examples(rng):
    d = rng.standard_normal(7)
    assert op_norm(np.diag(d)) == pytest.approx(np.max(np.abs(d)))
    A = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
    assert op_norm(A) == pytest.approx(np.linalg.svd(A, compute_uv=False)[0], rel=1e-8)


def test_power_norm_monotone_in_N():
    W = Wco(Symbol.rational([2, 1], [2]), parabolic_normal_form(1.0))
    vals = [op_norm(compress(power(W, 4), DIRICHLET, N)) for N in (16, 32, 64, 128)]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(vals, vals[1:]))


# invertibility ----------------------------------------------------------------


def test_check_invertible_positive():
    ok, Winv, wit = check_invertible(Wco(Symbol.polynomial([2, 1]), Moebius.from_p_theta(0.2 + 0.1j, 0.3)), N=128)
    assert ok and wit["reason"] is None and wit["block_error"] < 1e-6
    f = Series([1, -1, 0.5])
    back = apply(Winv, apply(Wco(Symbol.polynomial([2, 1]), Moebius.from_p_theta(0.2 + 0.1j, 0.3)), f, 60), 60)
    np.testing.assert_allclose(back.coeffs[:10], f.truncate(9).coeffs, atol=1e-8)


def test_check_invertible_negative():
    ok, Winv, wit = check_invertible(Wco(Series([0, 1]), Moebius.rotation(0.3)))
    assert not ok and Winv is None and "not bounded away from zero" in wit["reason"]
    ok, _, wit = check_invertible(Wco(Symbol.polynomial([2, 1]), HALF))
    assert not ok and wit["reason"] == "phi is not an automorphism"
    ok, _, wit = check_invertible(Wco(Symbol.polynomial([2, 1]), Series([0, 0.5, 0.2])))
    assert not ok and wit["reason"] == "phi is not an automorphism"


def test_check_invertible_unbounded_multiplier():
    k = np.arange(2, 257, dtype=float)
    u = Series(np.concatenate([[4.0, 0.0], 1 / (k * np.log(k) ** 0.75)]))
    ok, _, wit = check_invertible(Wco(u, Moebius.rotation(0.3)), N=256)
    assert not ok and wit["reason"] == "no bounded multiplier trend for h"


def test_inverse_formula_pointwise():
    W = Wco(Symbol.polynomial([3, 1j]), Moebius.from_p_theta(0.5, 2.0))
    Wi = inverse(W)
    z = 0.6 * np.exp(2j * np.pi * np.arange(8) / 8)
    # (W Wi f)(z) = h(z) * (1/h(phi^-1(phi(z)))) f(z) = f(z)
    np.testing.assert_allclose(W.u(z) * Wi.u(W.phi(z)), 1.0, atol=1e-13)
