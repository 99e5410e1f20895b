"""Truncated power series on the unit disc.

A :class:`Series` holds the Taylor coefficients ``a_0 .. a_N`` of an analytic
function.  :class:`Symbol` is a product of rational factors ``P_i/Q_i``; it is
what operator symbols are stored as, because products of rational factors can
be expanded exactly with causal recurrences (no sampling, no r**-N blow-up).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.signal import fftconvolve, lfilter

# FIR factors longer than this are applied with FFT convolution instead of lfilter
_FFT_TAPS = 64


def _as_coeffs(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=complex))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    return arr


@dataclass(frozen=True, eq=False)
class Series:
    """Taylor coefficients ``a_0 .. a_N`` of a truncated analytic function."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_coeffs(self.coeffs)
        if not np.all(np.isfinite(arr)):
            raise ValueError("series coefficients must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def zeros(cls, order: int = 0) -> "Series":
        return cls(np.zeros(order + 1, dtype=complex))

    @classmethod
    def constant(cls, c: complex, order: int = 0) -> "Series":
        a = np.zeros(order + 1, dtype=complex)
        a[0] = c
        return cls(a)

    @classmethod
    def monomial(cls, k: int, order: int | None = None) -> "Series":
        order = k if order is None else order
        a = np.zeros(order + 1, dtype=complex)
        if k <= order:
            a[k] = 1.0
        return cls(a)

    def truncate(self, order: int) -> "Series":
        """Cut or zero-pad to the given order."""
        a = np.zeros(order + 1, dtype=complex)
        m = min(order, self.order) + 1
        a[:m] = self.coeffs[:m]
        return Series(a)

    def degree(self, tol: float = 0.0) -> int:
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        return int(nz[-1]) if nz.size else 0

    def __call__(self, z):
        return ps_eval(self, z)

    def __add__(self, other: "Series") -> "Series":
        return ps_add(self, other)

    def __neg__(self) -> "Series":
        return Series(-self.coeffs)

    def __sub__(self, other: "Series") -> "Series":
        return ps_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, Series):
            return ps_mul(self, other, max(self.order, other.order))
        return Series(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Series(order={self.order}, coeffs={np.array2string(self.coeffs[:6], precision=4)}...)"


def ps_add(a: Series, b: Series) -> Series:
    """Coefficientwise sum; the shorter operand is zero-padded."""
    n = max(a.order, b.order)
    return Series(a.truncate(n).coeffs + b.truncate(n).coeffs)


def ps_mul(a: Series, b: Series, out_order: int) -> Series:
    """Cauchy product truncated at ``out_order``."""
    if out_order < 0:
        raise ValueError("out_order must be >= 0")
    x = a.coeffs[: out_order + 1]
    y = b.coeffs[: out_order + 1]
    if min(x.size, y.size) > _FFT_TAPS:
        prod = fftconvolve(x, y)
    else:
        prod = np.convolve(x, y)
    return Series(prod[: out_order + 1]).truncate(out_order)


def ps_derivative(f: Series) -> Series:
    """Termwise derivative; an order-0 input gives the zero series of order 0."""
    if f.order == 0:
        return Series.zeros(0)
    k = np.arange(1, f.order + 1)
    return Series(k * f.coeffs[1:])


def ps_antiderivative(f: Series) -> Series:
    """Termwise antiderivative with zero constant term."""
    k = np.arange(1, f.order + 2)
    return Series(np.concatenate([[0.0], f.coeffs / k]))


def ps_eval(f: Series, z):
    """Horner evaluation of the truncated polynomial (accurate for ``|z| <= 1``)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def _is_pow2(m: int) -> bool:
    return m > 0 and (m & (m - 1)) == 0


def default_samples(order: int) -> int:
    """Smallest power of two that is >= 4 (N + 1)."""
    m = 4 * (order + 1)
    return 1 << (m - 1).bit_length()


def coeffs_from_samples(
    func: Callable, r: float = 0.9, N: int = 256, M: int | None = None
) -> Series:
    """Taylor coefficients from a discrete Cauchy integral on ``|z| = r``.

    ``func`` must accept an array of points.  The aliasing error in ``a_k`` is
    ``sum_{j>=1} |a_{k+jM}| r**(jM)``; rounding is amplified by ``r**-k``, so
    keep ``N`` modest when ``r`` is well inside the disc.
    """
    if M is None:
        M = default_samples(N)
    if not 0.0 < r < 1.0:
        raise ValueError("extraction radius r must lie in (0, 1)")
    if M < 2 * (N + 1) or not _is_pow2(M):
        raise ValueError("sample count M must be a power of two with M >= 2(N+1)")
    z = r * np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.broadcast_to(np.asarray(func(z), dtype=complex), z.shape)
    a = np.fft.fft(vals)[: N + 1] / M
    return Series(a / r ** np.arange(N + 1))


# ---------------------------------------------------------------------------
# rational symbols


def _trim(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if nz.size else c[:1]


def mul_rational(x: np.ndarray, num: np.ndarray, den: np.ndarray, axis: int = 0) -> np.ndarray:
    """Multiply truncated series (along ``axis``) by ``num(z)/den(z)``.

    This is the causal recurrence ``den * y = num * x``, exact up to rounding
    for every retained coefficient.  ``den`` must not vanish on the closed disc
    for the recurrence to be stable.
    """
    if den.size == 1 and num.size > _FFT_TAPS:
        n = x.shape[axis]
        shape = [1] * x.ndim
        shape[axis] = num.size
        y = fftconvolve(x, (num / den[0]).reshape(shape), axes=axis)
        return np.take(y, np.arange(n), axis=axis)
    return lfilter(num, den, x, axis=axis)


def compose_rational(num, den, m) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of ``(num/den) o m`` for a Moebius map ``m``.

    Homogenises both polynomials to the common degree, so the pole of ``m`` is
    carried by matching powers of ``cz + d``.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    D = max(len(num), len(den)) - 1
    lin_n = np.array([b, a])
    lin_d = np.array([d, c])

    def hom(p):
        out = np.zeros(D + 1, dtype=complex)
        for i, pi in enumerate(p):
            if pi == 0:
                continue
            term = P.polymul(P.polypow(lin_n, i), P.polypow(lin_d, D - i))
            out[: term.size] += pi * term
        return _trim(out)

    return hom(num), hom(den)


@dataclass(frozen=True, eq=False)
class Symbol:
    """Analytic symbol ``prod_i num_i(z) / den_i(z)`` (ascending coefficients)."""

    factors: tuple

    def __post_init__(self):
        fixed = []
        for num, den in self.factors:
            num = _trim(_as_coeffs(num))
            den = _trim(_as_coeffs(den))
            if den[0] == 0:
                raise ValueError("denominator vanishes at 0; symbol is not analytic on the disc")
            fixed.append((num, den))
        object.__setattr__(self, "factors", tuple(fixed))

    @classmethod
    def constant(cls, c: complex) -> "Symbol":
        return cls(((np.array([c]), np.array([1.0])),))

    @classmethod
    def polynomial(cls, coeffs) -> "Symbol":
        return cls(((_as_coeffs(coeffs), np.array([1.0])),))

    @classmethod
    def rational(cls, num, den) -> "Symbol":
        return cls(((_as_coeffs(num), _as_coeffs(den)),))

    @classmethod
    def coerce(cls, obj) -> "Symbol":
        if isinstance(obj, Symbol):
            return obj
        if isinstance(obj, Series):
            return cls.polynomial(obj.coeffs)
        if np.isscalar(obj):
            return cls.constant(obj)
        return cls.polynomial(obj)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for num, den in self.factors:
            out = out * P.polyval(z, num) / P.polyval(z, den)
        return out[()] if out.ndim == 0 else out

    def __mul__(self, other) -> "Symbol":
        other = Symbol.coerce(other)
        return Symbol(self.factors + other.factors)

    __rmul__ = __mul__

    def reciprocal(self) -> "Symbol":
        for num, _ in self.factors:
            if num[0] == 0:
                raise ZeroDivisionError("symbol vanishes at 0; reciprocal is not analytic")
        return Symbol(tuple((den, num) for num, den in self.factors))

    def compose(self, m) -> "Symbol":
        """``self o m`` for a Moebius map ``m``; intended for low-degree factors."""
        return Symbol(tuple(compose_rational(num, den, m) for num, den in self.factors))

    def series(self, order: int) -> Series:
        x = np.zeros(order + 1, dtype=complex)
        x[0] = 1.0
        return Series(self.apply_to(x))

    def apply_to(self, x: np.ndarray, axis: int = 0) -> np.ndarray:
        """Multiply the truncated series in ``x`` (along ``axis``) by this symbol."""
        for num, den in self.factors:
            x = mul_rational(x, num, den, axis=axis)
        return x

    @property
    def is_constant(self) -> bool:
        return all(num.size == 1 and den.size == 1 for num, den in self.factors)

    def __repr__(self) -> str:
        return f"Symbol({len(self.factors)} factor(s))"


def as_series(f, order: int | None = None) -> Series:
    """Coerce sequences, Series or Symbols to a Series of the given order."""
    if isinstance(f, Symbol):
        if order is None:
            raise ValueError("order required to expand a Symbol")
        return f.series(order)
    if not isinstance(f, Series):
        f = Series(f)
    return f if order is None else f.truncate(order)
