"""Predicted spectra, eigenvalue clouds of finite sections, and radius sequences.

Finite sections of non-normal operators can show spurious eigenvalues, so
clouds are reported as evidence only.  The checkable quantities are radius
sequences ``||P_N W^n P_N||^(1/n)`` and exactly solvable (triangular) cases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import moebius as mb
from .moebius import Moebius, classify, derivative_sup, hyperbolic_normal_form, parabolic_normal_form
from .series import Symbol
from .spaces import DIRICHLET, as_space
from .wco import Compression, Wco, check_invertible, compress, disc_grid, op_norm, power, symbol_iterate

EIG_CAP = 2049
CURVE_SAMPLES = 4096


@dataclass(eq=False)
class SpectrumModel:
    """Spectrum predicted for an invertible (or periodic) weighted composition operator.

    ``shape`` is one of ``circle``, ``annulus``, ``rootset``, ``pointset``;
    ``params`` carries the radii, the period ``m`` and image samples.  For
    ``rootset`` the set is ``{lambda : lambda^m in closure h_(m)(D)}`` and
    ``symbol`` holds ``h_(m)``.
    """

    shape: str
    params: dict
    provenance: str
    symbol: Symbol | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.shape == "circle" and self.params["radius"] < 0:
            raise ValueError("circle radius must be >= 0")
        if self.shape == "annulus" and self.params["r_in"] > self.params["r_out"]:
            raise ValueError("annulus needs r_in <= r_out")

    def _curve(self) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(CURVE_SAMPLES) / CURVE_SAMPLES)
        return np.asarray(self.symbol(z))

    def distance(self, lam) -> np.ndarray:
        """Distance of each ``lam`` to the predicted set.

        For ``rootset`` the distance is measured in the ``lambda^m`` plane:
        zero inside the image region (nonzero winding number of the boundary
        curve), otherwise the distance to the boundary curve.
        """
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        if self.shape == "circle":
            return np.abs(np.abs(lam) - self.params["radius"])
        if self.shape == "annulus":
            r = np.abs(lam)
            return np.maximum(0.0, np.maximum(self.params["r_in"] - r, r - self.params["r_out"]))
        if self.shape == "pointset":
            pts = np.array([complex(*p) for p in self.params["points"]])
            return np.min(np.abs(lam[:, None] - pts[None, :]), axis=1)
        curve = self._curve()
        w = lam ** self.params["m"]
        out = np.empty(w.size)
        for i, wi in enumerate(w):
            d = curve - wi
            dmin = np.min(np.abs(d))
            if dmin == 0.0:
                out[i] = 0.0
                continue
            turns = np.sum(np.angle(np.roll(d, -1) / d)) / (2 * math.pi)
            out[i] = 0.0 if abs(round(turns)) >= 1 else dmin
        return out

    def contains(self, lam, tol: float = 1e-9) -> np.ndarray:
        return self.distance(lam) <= tol

    def to_dict(self) -> dict:
        return {"shape": self.shape, "params": self.params, "provenance": self.provenance}


def _pairs(values) -> list:
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def predicted_spectrum(W: Wco, check_order: int = 64) -> SpectrumModel:
    """Spectrum model for ``W_{h,phi}`` with ``phi`` a disc automorphism.

    * periodic elliptic (rotation angle ``2 pi p/q``, ``q <= 64``) and the
      identity: ``rootset`` with ``m = q``;
    * aperiodic elliptic and parabolic: ``circle`` of radius ``|h(a)|``;
    * hyperbolic: ``annulus`` ``[min|h| mu, max|h| / mu]`` over the two fixed
      points.  This is a containment bound only.

    The circle and annulus branches require :func:`check_invertible` to pass.
    """
    if not (W.is_moebius and W.phi.is_automorphism()):
        raise ValueError("predicted spectrum needs a disc automorphism phi")
    cls = classify(W.phi)
    h = W.u
    if cls.kind == mb.IDENTITY and h.is_constant:
        c = complex(h(0.0))
        return SpectrumModel("pointset", {"points": _pairs([c])}, "identity", symbol=h)
    if cls.period is not None:
        m = cls.period
        hm = symbol_iterate(h, W.phi, m)
        t = 2 * np.pi * np.arange(256) / 256
        params = {
            "m": m,
            "rotation": list(cls.rotation_fraction) if cls.rotation_fraction else [0, 1],
            "boundary_samples": _pairs(hm(np.exp(1j * t))),
            "disc_samples": _pairs(hm(disc_grid(8, 32))),
        }
        return SpectrumModel("rootset", params, f"{cls.kind}-periodic", symbol=hm)

    ok, _, witness = check_invertible(W, check_order)
    if not ok:
        raise ValueError(f"operator is not invertible: {witness['reason']}")
    if cls.kind == mb.ELLIPTIC:
        r = abs(complex(h(cls.fixed_points[0])))
        return SpectrumModel("circle", {"radius": r, "fixed_point": _pairs(cls.fixed_points[:1])[0]}, "elliptic-aperiodic")
    if cls.kind == mb.PARABOLIC:
        r = abs(complex(h(cls.fixed_points[0])))
        return SpectrumModel("circle", {"radius": r, "fixed_point": _pairs(cls.fixed_points)[0]}, "parabolic")
    ha, hb = (abs(complex(h(z))) for z in cls.fixed_points)
    mu = cls.multiplier
    params = {
        "r_in": min(ha, hb) * mu,
        "r_out": max(ha, hb) / mu,
        "mu": mu,
        "h_attracting": ha,
        "h_repelling": hb,
        "containment_only": True,
    }
    return SpectrumModel("annulus", params, "hyperbolic")


def eig_cloud(C, cap: int = EIG_CAP) -> np.ndarray:
    """All eigenvalues of a finite section.

    Triangular matrices return their diagonal; everything else goes through
    LAPACK's Hessenberg-QR driver.
    """
    m = C.matrix if isinstance(C, Compression) else np.asarray(C)
    if m.shape[0] > cap:
        raise ValueError(f"matrix size {m.shape[0]} exceeds the dense eigensolver cap {cap}")
    if not np.any(np.triu(m, 1)) or not np.any(np.tril(m, -1)):
        return np.diag(m).copy()
    return np.linalg.eigvals(m)


@dataclass(frozen=True)
class RadiusSequence:
    """Entries ``(n, ||P_N W^n P_N||^(1/n))`` for increasing ``n``."""

    entries: tuple
    order: int

    @property
    def limit_guess(self) -> float:
        return self.entries[-1][1]

    def to_list(self) -> list:
        return [[int(n), float(r)] for n, r in self.entries]


def radius_sequence(W: Wco, w=DIRICHLET, N: int = 256, n_list=(1, 2, 4, 8, 16, 32, 64)) -> RadiusSequence:
    """Gelfand-type sequence from finite sections of ``W^n`` (closed-form powers)."""
    if not W.is_moebius:
        raise ValueError("radius sequences need a Moebius phi")
    ns = sorted(set(int(n) for n in n_list))
    if not ns or ns[0] < 1:
        raise ValueError("n_list entries must be >= 1")
    entries = []
    for n in ns:
        s = op_norm(compress(power(W, n), w, N))
        entries.append((n, s ** (1.0 / n)))
    return RadiusSequence(tuple(entries), N)


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple  # (n, sup|phi_n'|, normalized)

    @property
    def normalized(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows])

    @property
    def spread(self) -> float:
        v = self.normalized
        return float(v.max() / v.min())


def growth_probe(kind: str, param: float, n_values) -> GrowthTable:
    """Tabulate ``sup|phi_n'|`` along the iterates of a normal form.

    Normalisation: ``/ n`` for parabolic (``param = y``), ``* mu^n`` for
    hyperbolic (``param = mu``), none for the elliptic rotation control
    (``param = angle``).
    """
    rows = []
    for n in n_values:
        n = int(n)
        if kind == "parabolic":
            s = derivative_sup(parabolic_normal_form(param, n))
            rows.append((n, s, s / n))
        elif kind == "hyperbolic":
            s = derivative_sup(hyperbolic_normal_form(param, n))
            rows.append((n, s, s * param**n))
        elif kind == "elliptic":
            s = derivative_sup(mb.iterate(Moebius.rotation(param), n))
            rows.append((n, s, s))
        else:
            raise ValueError(f"unknown probe kind {kind!r}")
    return GrowthTable(tuple(rows))


def annulus_probe(W: Wco, w=DIRICHLET, N_list=(64, 128, 256), n_list=(8, 16, 32), delta: float = 0.15, bins: int = 20) -> dict:
    """Exploratory look at how finite-section clouds sit in the predicted annulus.

    No pass/fail.  For each ``N``: the fraction of eigenvalues inside the
    annulus dilated to ``[(1 - delta) r_in, (1 + delta) r_out]``, a histogram
    of ``|lambda|``, and radius sequences for ``W`` and ``W^-1``.
    """
    model = predicted_spectrum(W)
    if model.shape != "annulus":
        raise ValueError("annulus probe needs a hyperbolic phi")
    _, Winv, _ = check_invertible(W)
    lo, hi = (1 - delta) * model.params["r_in"], (1 + delta) * model.params["r_out"]
    edges = np.linspace(0.0, 1.5 * hi, bins + 1)
    out = {"exploratory": True, "predicted": model.to_dict(), "delta": delta, "space": str(as_space(w)), "runs": []}
    for N in N_list:
        lam = eig_cloud(compress(W, w, N))
        r = np.abs(lam)
        hist, _ = np.histogram(r, bins=edges)
        out["runs"].append({
            "N": int(N),
            "containment_fraction": float(np.mean((r >= lo) & (r <= hi))),
            "radial_histogram": {"edges": [float(e) for e in edges], "counts": [int(c) for c in hist]},
            "radius_sequence": radius_sequence(W, w, N, n_list).to_list(),
            "inverse_radius_sequence": radius_sequence(Winv, w, N, n_list).to_list(),
        })
    return out


@dataclass(eq=False)
class SpectrumReport:
    predicted: SpectrumModel | None
    eigenvalues: np.ndarray
    radius: RadiusSequence | None
    inverse_radius: RadiusSequence | None
    distances: np.ndarray | None
    metadata: dict

    def to_dict(self) -> dict:
        return {
            "predicted": self.predicted.to_dict() if self.predicted else None,
            "eigenvalues": _pairs(self.eigenvalues),
            "radius_sequence": self.radius.to_list() if self.radius else [],
            "inverse_radius_sequence": self.inverse_radius.to_list() if self.inverse_radius else [],
            "distances": [float(d) for d in self.distances] if self.distances is not None else [],
            "metadata": self.metadata,
        }


def spectrum_report(W: Wco, w=DIRICHLET, N: int = 256, n_list=(1, 2, 4, 8, 16, 32, 64), eigen: bool = True) -> SpectrumReport:
    """Predicted model, eigenvalue cloud and radius sequences for ``W`` and ``W^-1``."""
    w = as_space(w)
    meta: dict = {"N": int(N), "space": str(w), "n_list": [int(n) for n in n_list]}
    model = None
    try:
        model = predicted_spectrum(W)
    except ValueError as exc:
        meta["prediction_error"] = str(exc)
    if W.is_moebius and W.phi.is_automorphism():
        cls = classify(W.phi)
        meta["branch"] = {
            "kind": cls.kind,
            "in_parabolic_band": cls.in_band,
            "rotation_fraction": list(cls.rotation_fraction) if cls.rotation_fraction else None,
            "gap": cls.gap,
        }
    lam = eig_cloud(compress(W, w, N)) if eigen else np.array([], dtype=complex)
    radius = inv_radius = None
    if W.is_moebius:
        radius = radius_sequence(W, w, N, n_list)
        ok, Winv, witness = check_invertible(W) if W.phi.is_automorphism() else (False, None, {"reason": "phi is not an automorphism"})
        meta["invertible"] = bool(ok)
        meta["invertibility_reason"] = witness["reason"]
        if ok:
            inv_radius = radius_sequence(Winv, w, N, n_list)
    dist = model.distance(lam) if (model is not None and lam.size) else None
    return SpectrumReport(model, lam, radius, inv_radius, dist, meta)
