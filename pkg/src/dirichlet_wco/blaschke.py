"""Finite Blaschke products, model spaces and block decompositions.

For a finite Blaschke product ``B`` with ``B(0) = 0``, H^2 is the orthogonal
sum of the blocks ``B^k K_B`` with ``K_B = H^2 (-) B H^2``.  A function is
split as ``f = sum_k g_k B^k`` with ``g_k`` in ``K_B``; coordinates of
``g_k`` are taken against the Takenaka-Malmquist basis of ``K_B``, and all
projections are H^2 inner products evaluated on boundary samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import Series, Symbol, coeffs_from_samples, default_samples
from .spaces import SpaceWeight, as_space, seq_norm


@dataclass(frozen=True)
class BlaschkeProduct:
    """``constant * prod_j (z - alpha_j) / (1 - conj(alpha_j) z)``.

    With this sign convention a single zero at the origin gives ``B(z) = z``.
    """

    zeros: tuple
    constant: complex = 1.0

    def __post_init__(self):
        zeros = tuple(complex(a) for a in np.atleast_1d(np.asarray(self.zeros, dtype=complex)))
        if not zeros:
            raise ValueError("a Blaschke product needs at least one zero")
        if any(abs(a) >= 1 for a in zeros):
            raise ValueError("Blaschke zeros must lie in the open disc")
        if abs(abs(complex(self.constant)) - 1) > 1e-12:
            raise ValueError("the constant must be unimodular")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "constant", complex(self.constant))

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out[()] if out.ndim == 0 else out

    def as_symbol(self) -> Symbol:
        factors = [(np.array([-a, 1.0]), np.array([1.0, -np.conj(a)])) for a in self.zeros]
        factors[0] = (self.constant * factors[0][0], factors[0][1])
        return Symbol(tuple(factors))

    def vanishes_at_origin(self, tol: float = 1e-14) -> bool:
        return any(abs(a) <= tol for a in self.zeros)


def blaschke_series(B: BlaschkeProduct, N: int, method: str = "exact", r: float = 0.9) -> Series:
    """Taylor coefficients of ``B`` up to order ``N``.

    ``method="exact"`` runs the causal recurrence of each factor;
    ``method="sample"`` extracts from samples on ``|z| = r`` (fine for small
    ``N`` only, since rounding is amplified by ``r**-N``).
    """
    if method == "sample":
        return coeffs_from_samples(B, r=r, N=N)
    return B.as_symbol().series(N)


@dataclass(frozen=True, eq=False)
class ModelBasis:
    """Orthonormal Takenaka-Malmquist basis of ``K_B`` and its H^2 Gram matrix."""

    symbols: tuple
    functions: tuple
    gram: np.ndarray

    def values(self, z) -> np.ndarray:
        """Basis values, shape ``(len(z), n)``."""
        z = np.asarray(z, dtype=complex)
        return np.stack([e(z) for e in self.symbols], axis=-1)

    def __len__(self) -> int:
        return len(self.symbols)


def _boundary(M: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(M) / M)


def tm_basis(B: BlaschkeProduct, order: int = 64, samples: int | None = None) -> ModelBasis:
    """Takenaka-Malmquist functions
    ``e_k = sqrt(1 - |a_k|^2)/(1 - conj(a_k) z) * prod_{j<k} (z - a_j)/(1 - conj(a_j) z)``
    in the order the zeros are given.
    """
    symbols = []
    for k, a in enumerate(B.zeros):
        factors = [(np.array([np.sqrt(1 - abs(a) ** 2)]), np.array([1.0, -np.conj(a)]))]
        factors += [(np.array([-aj, 1.0]), np.array([1.0, -np.conj(aj)])) for aj in B.zeros[:k]]
        symbols.append(Symbol(tuple(factors)))
    M = samples or default_samples(order)
    E = np.stack([e(_boundary(M)) for e in symbols], axis=-1)
    gram = E.T @ np.conj(E) / M
    return ModelBasis(tuple(symbols), tuple(e.series(order) for e in symbols), gram)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``f ~ sum_{k<K} g_k B^k``; ``coords[k]`` are the coordinates of ``g_k``."""

    coords: np.ndarray
    B: BlaschkeProduct
    basis: ModelBasis
    residual: float
    order: int

    @property
    def blocks(self) -> int:
        return self.coords.shape[0]

    def block_norms(self) -> np.ndarray:
        """H^2 norms of the g_k (the basis is orthonormal)."""
        return np.linalg.norm(self.coords, axis=1)

    def component(self, k: int, order: int | None = None) -> Series:
        order = self.order if order is None else order
        out = np.zeros(order + 1, dtype=complex)
        for c, e in zip(self.coords[k], self.basis.symbols):
            out += c * e.series(order).coeffs
        return Series(out)


def _samples_of(f: Series, M: int) -> np.ndarray:
    a = np.zeros(M, dtype=complex)
    a[: f.order + 1] = f.coeffs
    return np.fft.ifft(a) * M


def _synthesize(coords: np.ndarray, B: BlaschkeProduct, basis: ModelBasis, M: int) -> np.ndarray:
    z = _boundary(M)
    E = basis.values(z)
    b = B(z)
    out = np.zeros(M, dtype=complex)
    bk = np.ones(M, dtype=complex)
    for c in coords:
        out += bk * (E @ c)
        bk = bk * b
    return out


def decompose(f: Series, B: BlaschkeProduct, K: int | None = None, samples: int | None = None) -> Decomposition:
    """Split ``f`` into its components in the blocks ``B^k K_B``, ``k < K``.

    The coordinate of ``g_k`` on ``e_i`` is ``<f, B^k e_i>_{H^2}``.  ``K``
    defaults to ``ceil((deg f + 1) / m0)`` with ``m0`` the multiplicity of the
    zero at the origin: ``B^K`` then vanishes to order ``> deg f`` at 0, so
    the polynomial ``f`` lies in ``K_{B^K}`` and the split is exact.  The
    residual is the H^2 norm of ``f - sum_{k<K} g_k B^k``.
    """
    if not B.vanishes_at_origin():
        raise ValueError("the decomposition needs a Blaschke product with B(0) = 0")
    N = f.order
    n = B.degree
    if K is None:
        m0 = sum(abs(a) <= 1e-14 for a in B.zeros)
        K = -(-(f.degree() + 1) // m0)
    if K < 1:
        raise ValueError(f"block count K={K} must be >= 1")
    M = samples or default_samples(N)
    z = _boundary(M)
    F = _samples_of(f, M)
    basis = tm_basis(B, order=N, samples=M)
    E = np.conj(basis.values(z))
    b = np.conj(B(z))
    coords = np.empty((K, n), dtype=complex)
    wk = F.copy()
    for k in range(K):
        coords[k] = wk @ E / M
        wk = wk * b
    resid = F - _synthesize(coords, B, basis, M)
    return Decomposition(coords, B, basis, float(np.sqrt(np.mean(np.abs(resid) ** 2))), N)


def reconstruct(d: Decomposition, N: int | None = None) -> Series:
    """``sum_k g_k B^k`` truncated at order ``N``."""
    N = d.order if N is None else N
    M = max(default_samples(N), default_samples(d.order))
    vals = _synthesize(d.coords, d.B, d.basis, M)
    return Series(np.fft.fft(vals)[: N + 1] / M)


def random_polynomial(rng: np.random.Generator, degree: int, order: int | None = None, decay: float = 0.0) -> Series:
    """Complex Gaussian coefficients scaled by ``(k + 1)^-decay``."""
    order = degree if order is None else order
    k = np.arange(degree + 1)
    a = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) * (k + 1.0) ** -decay
    return Series(a).truncate(order)


def frame_ratio(f: Series, d: Decomposition, w) -> float:
    """``||f||_w^2 / sum_k (k + 1)^s ||g_k||^2`` with ``s`` the exponent of ``w``."""
    w = as_space(w)
    norms = d.block_norms() ** 2
    denom = float(np.sum(w.weight(np.arange(norms.size)) * norms))
    return seq_norm(f, w) ** 2 / denom


def frame_bounds(
    B: BlaschkeProduct,
    w=SpaceWeight("dirichlet"),
    trials: int = 100,
    N: int = 512,
    degree: int | None = None,
    seed: int = 0,
    max_decay: float = 1.5,
) -> tuple[float, float]:
    """Empirical ``(c_lo, c_hi)`` of :func:`frame_ratio` over random polynomials.

    Degrees are uniform in ``[1, N // 2]`` unless ``degree`` is given.  The
    coefficient decays are stratified, evenly spaced over ``[0, max_decay]``
    across the trials, so the extremes do not hinge on a lucky decay draw;
    the coefficients themselves are random.
    """
    if not B.vanishes_at_origin():
        raise ValueError("frame bounds need a Blaschke product with B(0) = 0")
    rng = np.random.default_rng(seed)
    ratios = []
    for decay in np.linspace(0.0, max_decay, trials):
        deg = degree if degree is not None else int(rng.integers(1, N // 2 + 1))
        f = random_polynomial(rng, deg, N, decay=decay)
        ratios.append(frame_ratio(f, decompose(f, B), w))
    return float(min(ratios)), float(max(ratios))
