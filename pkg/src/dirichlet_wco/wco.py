"""Weighted composition operators ``f -> u (f o phi)`` and their finite sections."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .moebius import Moebius, classify, iterate
from .series import Series, Symbol, as_series, coeffs_from_samples, mul_rational, ps_eval
from .spaces import DIRICHLET, SpaceWeight, as_space, largest_singular_value, multiplier_norm

SELF_MAP_TOL = 1e-9
INF_TOL = 1e-6


def _self_map_grid() -> np.ndarray:
    # 192 boundary points and 64 interior points
    t = 2 * np.pi * np.arange(192) / 192
    rng = np.random.default_rng(1)
    inner = np.sqrt(rng.random(64)) * np.exp(2j * np.pi * rng.random(64))
    return np.concatenate([np.exp(1j * t), inner])


@dataclass(frozen=True, eq=False)
class Wco:
    """Symbol pair ``(u, phi)``; ``phi`` is a Moebius map or a Series.

    ``meta["iterate_of"]`` marks ``phi`` as an iterate of an automorphism that
    was already checked; deep iterates of hyperbolic maps are numerically
    indistinguishable from constants, so the checks are not repeated.
    """

    u: Symbol
    phi: object
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "u", Symbol.coerce(self.u))
        phi = self.phi
        if isinstance(phi, Moebius):
            if "iterate_of" in self.meta:
                return
            if not phi.is_self_map(SELF_MAP_TOL):
                raise ValueError("phi is not a self-map of the disc")
            if phi.is_automorphism() and "class" not in self.meta:
                self.meta["class"] = classify(phi)
        else:
            phi = as_series(phi)
            if np.max(np.abs(ps_eval(phi, _self_map_grid()))) > 1 + SELF_MAP_TOL:
                raise ValueError("phi is not a self-map of the disc")
            object.__setattr__(self, "phi", phi)

    @property
    def is_moebius(self) -> bool:
        return isinstance(self.phi, Moebius)

    @classmethod
    def identity(cls) -> "Wco":
        return cls(Symbol.constant(1.0), Moebius.identity())


def _mul_phi(x: np.ndarray, phi) -> np.ndarray:
    """Multiply the truncated series in ``x`` by ``phi``."""
    if isinstance(phi, Moebius):
        return mul_rational(x, np.array([phi.b, phi.a]), np.array([phi.d, phi.c]))
    return mul_rational(x, phi.coeffs[: x.size], np.array([1.0]))


def apply(W: Wco, f: Series, N: int, method: str = "exact", r: float = 0.9, M: int | None = None) -> Series:
    """Taylor coefficients of ``u (f o phi)`` up to order ``N``.

    ``method="exact"`` runs Horner's scheme in ``phi`` with causal
    recurrences; ``method="sample"`` evaluates ``u (f o phi)`` pointwise on
    ``|z| = r`` and extracts coefficients.
    """
    if method == "sample":
        return coeffs_from_samples(lambda z: W.u(z) * ps_eval(f, W.phi(z)), r=r, N=N, M=M)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    acc = np.zeros(N + 1, dtype=complex)
    for c in f.coeffs[::-1]:
        acc = _mul_phi(acc, W.phi)
        acc[0] += c
    return Series(W.u.apply_to(acc))


def symbol_iterate(h, phi: Moebius, n: int) -> Symbol:
    """The cocycle ``h_(n) = prod_{k<n} h o phi_k`` as an exact Symbol."""
    h = Symbol.coerce(h)
    if n == 0:
        return Symbol.constant(1.0)
    out = h
    for k in range(1, n):
        out = out * h.compose(iterate(phi, k))
    return out


def weight_iterate(h, phi: Moebius, n: int, N: int) -> Series:
    """Taylor coefficients of ``h_(n)`` up to order ``N``; ``h_(0) = 1``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return symbol_iterate(h, phi, n).series(N)


def power(W: Wco, n: int) -> Wco:
    """``W^n = W_{h_(n), phi_n}`` from closed forms."""
    if not W.is_moebius:
        raise ValueError("powers need a Moebius phi")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Wco.identity()
    if n == 1:
        return W
    meta = {"iterate_of": W.phi, "n": n} if "class" in W.meta else {}
    return Wco(symbol_iterate(W.u, W.phi, n), iterate(W.phi, n), meta)


@dataclass(frozen=True, eq=False)
class Compression:
    """Finite section ``P_N W P_N`` in the basis ``z^k / sqrt(w(k))``."""

    matrix: np.ndarray
    space: SpaceWeight
    order: int


def composition_matrix(phi, N: int) -> np.ndarray:
    """Column ``k`` holds the coefficients of ``phi^k`` up to order ``N``."""
    C = np.zeros((N + 1, N + 1), dtype=complex)
    col = np.zeros(N + 1, dtype=complex)
    col[0] = 1.0
    C[:, 0] = col
    for k in range(1, N + 1):
        col = _mul_phi(col, phi)
        C[:, k] = col
    return C


def compress(W: Wco, w=DIRICHLET, N: int = 256) -> Compression:
    """``M[j, k] = sqrt(w(j)/w(k)) [z^j](u phi^k)``."""
    w = as_space(w)
    C = W.u.apply_to(composition_matrix(W.phi, N), axis=0)
    wk = w.weight(np.arange(N + 1))
    # the ratio form keeps the diagonal scaling exactly 1
    C *= np.sqrt(wk[:, None] / wk[None, :])
    return Compression(C, w, N)


def op_norm(C: Compression, **kw) -> float:
    """Largest singular value of the finite section (power iteration)."""
    m = C.matrix if isinstance(C, Compression) else np.asarray(C)
    return largest_singular_value(m, **kw)


def disc_grid(radii: int = 64, angles: int = 256) -> np.ndarray:
    """Polar grid on the closed disc, boundary included."""
    r = np.linspace(0.0, 1.0, radii + 1)[1:]
    t = 2 * np.pi * np.arange(angles) / angles
    return np.concatenate([[0.0], (r[:, None] * np.exp(1j * t)[None, :]).ravel()])


def inverse(W: Wco) -> Wco:
    """``(1 / (h o phi^-1)) C_{phi^-1}``; no checks, see :func:`check_invertible`."""
    phi_inv = W.phi.inverse()
    return Wco(W.u.compose(phi_inv).reciprocal(), phi_inv)


def check_invertible(W: Wco, N: int = 128, trend_ratio: float = 1.05):
    """Test the invertibility conditions and build the inverse when they hold.

    Returns ``(invertible, inverse_or_None, witness)``.  The witness records
    each condition; ``witness["reason"]`` names the first one that failed.
    The multiplier evidence is the growth of ``||P_M T_h P_M||`` over
    ``M = N/4, N/2, N``; growth beyond ``trend_ratio`` counts as unbounded.
    """
    witness: dict = {"reason": None}
    auto = W.is_moebius and ("iterate_of" in W.meta or W.phi.is_automorphism())
    witness["automorphism"] = bool(auto)
    if not auto:
        witness["reason"] = "phi is not an automorphism"
        return False, None, witness

    inf_h = float(np.min(np.abs(W.u(disc_grid()))))
    witness["inf_abs_h"] = inf_h
    witness["bounded_away_from_zero"] = inf_h > INF_TOL
    if inf_h <= INF_TOL:
        witness["reason"] = "h is not bounded away from zero"
        return False, None, witness

    orders = [max(N // 4, 4), max(N // 2, 8), max(N, 16)]
    trend = [(m, multiplier_norm(W.u, DIRICHLET, m)) for m in orders]
    witness["multiplier_trend"] = trend
    bounded = trend[-1][1] <= trend_ratio * trend[0][1]
    witness["multiplier_bounded"] = bool(bounded)
    if not bounded:
        witness["reason"] = "no bounded multiplier trend for h"
        return False, None, witness

    Winv = inverse(W)
    A = compress(W, DIRICHLET, N).matrix
    B = compress(Winv, DIRICHLET, N).matrix
    half = N // 2
    prod = (A @ B)[: half + 1, : half + 1]
    witness["block_error"] = float(np.max(np.abs(prod - np.eye(half + 1))))
    return True, Winv, witness
