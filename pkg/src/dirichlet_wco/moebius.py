"""Moebius transforms as 2x2 complex matrices.

Maps are composed by matrix product and only evaluated at the edges, so the
group structure is exact up to the rounding of a handful of products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"
HYPERBOLIC = "hyperbolic"
IDENTITY = "identity"

#: half-width of the band on |p| - cos(theta/2) reported as parabolic
CLASSIFY_TOL = 1e-9


@dataclass(frozen=True)
class Moebius:
    """``z -> (a z + b) / (c z + d)``, normalised to ``ad - bc = 1``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if det == 0 or not np.isfinite(det):
            raise ValueError("degenerate Moebius map: ad - bc = 0")
        s = np.sqrt(det)
        self._set_entries([a / s, b / s, c / s, d / s])

    def _set_entries(self, vals) -> None:
        # fix the sign ambiguity of the square root so equal maps compare equal
        lead = next(v for v in vals if abs(v) > 1e-300)
        if lead.real < 0 or (lead.real == 0 and lead.imag < 0):
            vals = [-v for v in vals]
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, complex(v))

    @classmethod
    def _unimodular(cls, mat) -> "Moebius":
        """Wrap a matrix already known to have determinant 1 (no renormalisation).

        Powers of ill-conditioned maps lose ``ad - bc`` to cancellation even
        though it is exactly 1 in exact arithmetic.
        """
        obj = object.__new__(cls)
        obj._set_entries([complex(v) for v in np.asarray(mat, dtype=complex).ravel()])
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def from_matrix(cls, mat) -> "Moebius":
        mat = np.asarray(mat, dtype=complex)
        return cls(mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_p_theta(cls, p: complex, theta: float) -> "Moebius":
        """``e^{i theta} (p - z) / (1 - conj(p) z)``."""
        p = complex(p)
        if abs(p) >= 1:
            raise ValueError("|p| must be < 1 for a disc automorphism")
        e = np.exp(1j * theta)
        return cls(-e, e * p, -np.conj(p), 1)

    @classmethod
    def rotation(cls, theta: float) -> "Moebius":
        e = np.exp(0.5j * theta)
        return cls(e, 0, 0, 1 / e)

    @classmethod
    def involution(cls, a: complex) -> "Moebius":
        """``(a - z) / (1 - conj(a) z)``, swapping ``0`` and ``a``."""
        return cls.from_p_theta(a, 0.0)

    # algebra --------------------------------------------------------------
    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (self.a * z + self.b) / (self.c * z + self.d)
        return out[()] if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = 1.0 / (self.c * z + self.d) ** 2
        return out[()] if out.ndim == 0 else out

    def __matmul__(self, other: "Moebius") -> "Moebius":
        """Composition ``self o other``."""
        return Moebius.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    @property
    def zero(self) -> complex:
        return -self.b / self.a if self.a != 0 else complex("inf")

    @property
    def pole(self) -> complex:
        return -self.d / self.c if self.c != 0 else complex("inf")

    def is_identity(self, tol: float = 1e-13) -> bool:
        m = self.matrix
        return np.max(np.abs(m - m[0, 0] * np.eye(2))) <= tol * np.max(np.abs(m))

    def is_automorphism(self, tol: float = 1e-10) -> bool:
        """Three boundary points land on the circle and 0 lands inside."""
        pts = np.exp(2j * np.pi * np.array([0.0, 1 / 3, 2 / 3]) + 0.1j)
        if abs(self.c * 0 + self.d) == 0:
            return False
        img = self(pts)
        if not np.all(np.isfinite(img)):
            return False
        return bool(np.all(np.abs(np.abs(img) - 1) <= tol) and abs(self(0.0)) < 1)

    def is_self_map(self, tol: float = 1e-9) -> bool:
        """``|m| <= 1 + tol`` on the closed disc (pole outside it)."""
        if abs(self.pole) <= 1 + tol:
            return False
        t = 2 * np.pi * np.arange(256) / 256
        z = np.exp(1j * t)
        return bool(np.max(np.abs(self(z))) <= 1 + tol and abs(self(0.0)) < 1 + tol)

    def to_p_theta(self) -> tuple[complex, float]:
        """Recover ``(p, theta)`` with ``self = e^{i theta} (p - z)/(1 - conj(p) z)``."""
        p = self.zero
        e = self.derivative(0.0) / (abs(p) ** 2 - 1)
        theta = float(np.angle(e))
        if theta <= -math.pi:
            theta = math.pi
        return complex(p), theta

    def normalized_close(self, other: "Moebius", tol: float = 1e-12) -> bool:
        """Entrywise agreement of the normalised matrices, up to sign."""
        x, y = self.matrix, other.matrix
        scale = max(np.max(np.abs(x)), np.max(np.abs(y)))
        return bool(min(np.max(np.abs(x - y)), np.max(np.abs(x + y))) <= tol * scale)


@dataclass(frozen=True)
class AutoClass:
    """Dynamics type of a disc automorphism.

    ``multiplier`` is the rotation angle (elliptic), ``mu`` in (0, 1)
    (hyperbolic), or the translation parameter ``y`` (parabolic).
    Hyperbolic fixed points are ordered attracting, repelling; elliptic ones
    interior, exterior.
    """

    kind: str
    fixed_points: tuple
    multiplier: float
    gap: float
    in_band: bool = False
    rotation_fraction: tuple | None = field(default=None)

    @property
    def period(self) -> int | None:
        """Smallest m with phi_m = id, when the rotation is (declared) rational."""
        if self.kind == IDENTITY:
            return 1
        return self.rotation_fraction[1] if self.rotation_fraction else None


def rational_rotation(angle: float, qmax: int = 64, tol: float = 1e-12):
    """``(p, q)`` with ``|angle/2pi - p/q| < tol`` and ``q <= qmax``, else None."""
    x = (angle / (2 * math.pi)) % 1.0
    frac = Fraction(x).limit_denominator(qmax)
    if abs(x - frac) < tol:
        return frac.numerator % frac.denominator, frac.denominator
    # x close to 1 from below
    if abs(x - 1.0) < tol:
        return 0, 1
    return None


def fixed_points(m: Moebius) -> tuple:
    """Roots of ``c z^2 + (d - a) z - b = 0``; ``inf`` is fixed when ``c = 0``.

    Uses the cancellation-free form of the quadratic formula.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    B = d - a
    if abs(c) <= 1e-15 * scale:
        return () if abs(B) <= 1e-15 * scale else (b / B, complex(np.inf))
    disc = np.sqrt(B * B + 4 * b * c)
    q = -0.5 * (B + disc if abs(B + disc) >= abs(B - disc) else B - disc)
    if q == 0:
        return (0j, 0j)
    return (q / c, -b / q)


def classify(m: Moebius, tol: float = CLASSIFY_TOL, qmax: int = 64) -> AutoClass:
    """Elliptic / parabolic / hyperbolic by the sign of ``|p| - cos(theta/2)``.

    Inputs with ``||p| - cos(theta/2)| <= tol`` are reported parabolic with
    ``in_band`` set.
    """
    if not m.is_automorphism():
        raise ValueError("classify needs a disc automorphism")
    if m.is_identity():
        return AutoClass(IDENTITY, (), 0.0, 0.0)
    p, theta = m.to_p_theta()
    gap = abs(p) - math.cos(theta / 2)
    fps = fixed_points(m)
    if abs(gap) <= tol:
        a, c, d = m.a, m.c, m.d
        fp = (a - d) / (2 * c)
        fp = fp / abs(fp)
        g = Moebius(-fp, 0, 0, 1)
        w = (g.inverse() @ m @ g)(0.0)
        y = float((2j * w / (1 + w)).real)
        return AutoClass(PARABOLIC, (complex(fp),), y, gap, in_band=True)
    if gap > 0:
        f1, f2 = (z / abs(z) for z in fps)
        d1, d2 = abs(m.derivative(f1)), abs(m.derivative(f2))
        att, rep = (f1, f2) if d1 < d2 else (f2, f1)
        mu = float(min(d1, d2))
        return AutoClass(HYPERBOLIC, (complex(att), complex(rep)), mu, gap)
    inner, outer = sorted(fps, key=abs)
    angle = float(np.angle(m.derivative(inner)))
    return AutoClass(
        ELLIPTIC, (complex(inner), complex(outer)), angle, gap,
        rotation_fraction=rational_rotation(angle, qmax=qmax),
    )


def iterate(m: Moebius, n: int) -> Moebius:
    """``m o m o ... o m`` (n times); ``n = 0`` gives the identity."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Moebius._unimodular(np.linalg.matrix_power(m.matrix, n))


def parabolic_normal_form(y: float, n: int = 1) -> Moebius:
    """``((2 - niy) z - niy) / (niy z + 2 + niy)``; fixes -1."""
    if y == 0:
        raise ValueError("y must be non-zero")
    if n < 1:
        raise ValueError("n must be >= 1")
    t = 1j * n * y
    return Moebius(2 - t, -t, t, 2 + t)


def hyperbolic_normal_form(mu: float, j: int = 1) -> Moebius:
    """``((1 + mu^j) z + (1 - mu^j)) / ((1 - mu^j) z + (1 + mu^j))``; fixes +1 and -1."""
    if not 0 < mu < 1:
        raise ValueError("mu must lie in (0, 1)")
    if j < 1:
        raise ValueError("j must be >= 1")
    s = mu**j
    # scaled to determinant 1 up front: for tiny mu^j the raw determinant cancels
    k = 2 * math.sqrt(s)
    return Moebius._unimodular([(1 + s) / k, (1 - s) / k, (1 - s) / k, (1 + s) / k])


def derivative_sup(m: Moebius, grid: int = 4096) -> float:
    """``sup_D |m'|`` for a disc automorphism.

    With ``ad - bc = 1`` an automorphism has ``|d|^2 - |c|^2 = 1``, so
    ``min_T |cz + d| = |d| - |c| = 1/(|d| + |c|)`` and the sup is
    ``(|c| + |d|)^2``, free of the cancellation in ``(1 + |alpha|)/(1 - |alpha|)``
    (``alpha`` the zero of ``m``), which it equals.  The value is
    cross-checked against a boundary grid and the attaining point
    ``alpha/|alpha|``.
    """
    if not m.is_automorphism():
        raise ValueError("derivative_sup needs a disc automorphism")
    value = (abs(m.c) + abs(m.d)) ** 2
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    grid_max = float(np.max(np.abs(m.derivative(z))))
    r = abs(m.zero)
    peak = abs(m.derivative(m.zero / r)) if r > 0 else abs(m.derivative(1.0))
    # evaluating |cz + d| near its minimum loses ~ eps * value relative accuracy
    slack = 1e-9 + 8 * np.finfo(float).eps * value
    if grid_max > value * (1 + slack) or abs(peak - value) > slack * value:
        raise RuntimeError("derivative bound failed its boundary cross-check")
    return float(value)


def _three_point(z1, z2, z3, w1, w2, w3) -> Moebius:
    """The Moebius map sending z_i to w_i."""

    def to_std(p, q, r):
        # sends p, q, r to 0, 1, inf
        return np.array([[q - r, -p * (q - r)], [q - p, -r * (q - p)]], dtype=complex)

    A = to_std(z1, z2, z3)
    B = to_std(w1, w2, w3)
    return Moebius.from_matrix(np.linalg.inv(B) @ A)


def conjugate_to_canonical(m: Moebius) -> tuple[Moebius, Moebius]:
    """Return ``(canonical, g)`` with ``g^{-1} o m o g = canonical``.

    canonical is a rotation about 0 (elliptic), a parabolic normal form fixing
    -1 (parabolic), or the hyperbolic normal form fixing +1 (attracting) and -1
    (hyperbolic).
    """
    cls = classify(m)
    if cls.kind == IDENTITY:
        raise ValueError("the identity has no canonical form")
    if cls.kind == ELLIPTIC:
        a = cls.fixed_points[0]
        g = Moebius(1, a, np.conj(a), 1)
        canonical = Moebius.rotation(cls.multiplier)
    elif cls.kind == PARABOLIC:
        g = Moebius(-cls.fixed_points[0], 0, 0, 1)
        canonical = parabolic_normal_form(cls.multiplier, 1)
    else:
        att, rep = cls.fixed_points
        span = (np.angle(rep) - np.angle(att)) % (2 * math.pi)
        mid = np.exp(1j * (np.angle(att) + span / 2))
        g = _three_point(1, 1j, -1, att, mid, rep)
        canonical = hyperbolic_normal_form(cls.multiplier, 1)
    conj = g.inverse() @ m @ g
    rng = np.random.default_rng(0)
    pts = 0.9 * np.sqrt(rng.random(16)) * np.exp(2j * np.pi * rng.random(16))
    if np.max(np.abs(conj(pts) - canonical(pts))) > 1e-10:
        raise RuntimeError("conjugacy check failed")
    return canonical, g
