"""Dirichlet, Hardy and Bergman spaces as weighted coefficient spaces.

All operator-level work uses the sequence norms ``sum w(k) |a_k|^2`` with
``w(k) = (k + 1)^s``, ``s = 1, 0, -1``.  The area-integral Dirichlet norm is
kept only as an independent check.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from .series import Series, Symbol, as_series, ps_derivative

log = logging.getLogger(__name__)

_EXPONENTS = {"dirichlet": 1, "hardy": 0, "bergman": -1}


@dataclass(frozen=True)
class SpaceWeight:
    """Diagonal weight ladder ``(k + 1)^exponent`` of a coefficient space."""

    kind: str

    def __post_init__(self):
        if self.kind not in _EXPONENTS:
            raise ValueError(f"unknown space {self.kind!r}; expected one of {sorted(_EXPONENTS)}")

    @property
    def exponent(self) -> int:
        return _EXPONENTS[self.kind]

    def weight(self, k) -> np.ndarray:
        return (np.asarray(k, dtype=float) + 1.0) ** self.exponent

    def __str__(self) -> str:
        return self.kind


DIRICHLET = SpaceWeight("dirichlet")
HARDY = SpaceWeight("hardy")
BERGMAN = SpaceWeight("bergman")


def as_space(w) -> SpaceWeight:
    return w if isinstance(w, SpaceWeight) else SpaceWeight(str(w))


def seq_norm(f: Series, w=DIRICHLET) -> float:
    w = as_space(w)
    a = f.coeffs
    return float(np.sqrt(np.sum(w.weight(np.arange(a.size)) * np.abs(a) ** 2)))


def inner(f: Series, g: Series, w=DIRICHLET) -> complex:
    """Weighted inner product ``sum w(k) f_k conj(g_k)``."""
    w = as_space(w)
    n = min(f.order, g.order) + 1
    return complex(np.sum(w.weight(np.arange(n)) * f.coeffs[:n] * np.conj(g.coeffs[:n])))


def dual_pair(f: Series, g: Series) -> complex:
    """The unweighted pairing ``sum f_k conj(g_k)`` between X and Y."""
    n = min(f.order, g.order) + 1
    return complex(np.sum(f.coeffs[:n] * np.conj(g.coeffs[:n])))


def dirichlet_norm_integral(f: Series, radial_steps: int = 64, angular_steps: int = 64) -> float:
    """``sqrt(|f(0)|^2 + int_D |f'|^2 dA)`` by polar quadrature.

    Gauss-Legendre in the radius and the trapezoid rule in angle; both are
    exact for polynomials once the step counts exceed the degree.
    """
    if radial_steps < 64 or angular_steps < 64:
        raise ValueError("quadrature grids need at least 64 steps")
    x, wx = np.polynomial.legendre.leggauss(radial_steps)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * wx
    t = 2 * np.pi * np.arange(angular_steps) / angular_steps
    z = r[:, None] * np.exp(1j * t)[None, :]
    df = ps_derivative(f)(z)
    # dA = r dr dt / pi
    integrand = np.mean(np.abs(df) ** 2, axis=1) * 2.0 * r
    value = abs(f.coeffs[0]) ** 2 + float(np.sum(wr * integrand))
    return float(np.sqrt(value))


def dirichlet_kernel(w: complex, N: int) -> Series:
    """Reproducing kernel of X at ``w``: coefficients ``conj(w)^k / (k + 1)``."""
    if abs(w) >= 1:
        raise ValueError("kernel point must lie in the open disc")
    k = np.arange(N + 1)
    return Series(np.conj(complex(w)) ** k / (k + 1))


# ---------------------------------------------------------------------------
# norms of finite sections


def largest_singular_value(A, tol: float = 1e-10, maxiter: int = 10_000, seed: int = 0) -> float:
    """Top singular value by power iteration on ``A^H A``.

    Stops when the extrapolated remaining error of the estimate (from the
    observed contraction of successive changes) drops below ``tol``
    relative.  Deterministic for a fixed ``seed``.
    """
    op = A if isinstance(A, LinearOperator) else aslinearoperator(np.asarray(A))
    n = op.shape[1]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = prev = 0.0
    last_change = None
    for it in range(maxiter):
        Av = op.matvec(v)
        sigma = float(np.linalg.norm(Av))
        if sigma == 0.0:
            return 0.0
        v = op.rmatvec(Av)
        v /= np.linalg.norm(v)
        change = abs(sigma - prev)
        if it > 2 and last_change:
            ratio = min(change / last_change, 0.999999)
            if change / (1.0 - ratio) <= tol * sigma:
                break
        if change == 0.0 and it > 2:
            break
        last_change = change if change > 0 else last_change
        prev = sigma
    else:
        log.warning("power iteration hit maxiter=%d (sigma=%.6g)", maxiter, sigma)
    # the Rayleigh quotient of the final vector is the sharper estimate
    return float(np.linalg.norm(op.matvec(v)))


def _toeplitz_operator(coeffs: np.ndarray, left: np.ndarray, right: np.ndarray) -> LinearOperator:
    """``diag(left) T diag(right)`` with T the lower-triangular Toeplitz matrix of ``coeffs``."""
    n = left.size
    c = coeffs[:n]

    def matvec(x):
        return left * fftconvolve(c, right * np.ravel(x))[:n]

    def rmatvec(y):
        # (T^H y)_k = sum_j conj(c_{j-k}) y_j
        z = fftconvolve(np.conj(c)[::-1], left * np.ravel(y))
        return right * z[c.size - 1 : c.size - 1 + n]

    return LinearOperator((n, n), matvec=matvec, rmatvec=rmatvec, dtype=complex)


def multiplier_norm(u, w=DIRICHLET, N: int = 256, **kw) -> float:
    """``||P_N T_u P_N||`` in the weight-orthonormal basis ``z^k / sqrt(w(k))``.

    A lower bound for the multiplier norm, nondecreasing in ``N``.
    """
    w = as_space(w)
    u = as_series(u, N)
    s = np.sqrt(w.weight(np.arange(N + 1)))
    if np.count_nonzero(u.coeffs) == 1 and u.coeffs[0] != 0:
        return float(abs(u.coeffs[0]))
    return largest_singular_value(_toeplitz_operator(u.coeffs, s, 1.0 / s), **kw)


def carleson_norm_surrogate(h, N: int = 256, **kw) -> float:
    """Norm of ``f -> h' f`` from X (order N) to Y (order N).

    A finite-rank lower bound for the Carleson constant of ``|h'|^2 dA``.
    """
    h = as_series(h, N + 1) if isinstance(h, Symbol) else as_series(h)
    dh = ps_derivative(h).truncate(N)
    if not np.any(dh.coeffs):
        return 0.0
    k = np.arange(N + 1)
    left = np.sqrt(BERGMAN.weight(k))
    right = 1.0 / np.sqrt(DIRICHLET.weight(k))
    return largest_singular_value(_toeplitz_operator(dh.coeffs, left, right), **kw)
