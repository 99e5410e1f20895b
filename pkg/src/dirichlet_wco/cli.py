"""Command-line driver.

Exit codes: 0 success, 1 invalid input, 2 a ``--check`` acceptance check failed.

Symbol specs (``--h``, ``--u``, ``--f``):
  ``2,1``          coefficient list, here 2 + z (complex entries like ``1j`` allowed)
  ``2,1/2``        numerator/denominator lists, here (2 + z)/2
  ``loglacunary``  sum_{k>=2} z^k / (k (log k)^(3/4)), truncated at the order

Automorphism specs (``--phi``):
  ``identity``, ``rotation:THETA``, ``rotation-frac:P/Q`` (angle 2 pi P/Q),
  ``parabolic:Y``, ``hyperbolic:MU``, ``auto:P,THETA`` (e^{i THETA}(P - z)/(1 - conj(P) z)),
  ``half`` ((1 - z)/2, a non-automorphic self-map)
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .blaschke import BlaschkeProduct, decompose, frame_ratio, random_polynomial
from .moebius import Moebius, classify, hyperbolic_normal_form, parabolic_normal_form
from .series import Series, Symbol
from .spaces import as_space, largest_singular_value, multiplier_norm, seq_norm
from .spectra import annulus_probe, growth_probe, radius_sequence, spectrum_report
from .wco import Wco, compress

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2
RADIUS_BRACKET = (0.85, 1.25)


class CheckFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad arguments; here 2 is reserved for failed checks."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    return complex(text.strip().replace(" ", "").replace("i", "j"))


def _coeff_list(text: str) -> list:
    return [parse_complex(t) for t in text.split(",") if t.strip()]


def loglacunary(order: int) -> Series:
    k = np.arange(order + 1, dtype=float)
    c = np.zeros(order + 1)
    c[2:] = 1.0 / (k[2:] * np.log(k[2:]) ** 0.75)
    return Series(c)


def parse_symbol(text: str, order: int) -> Symbol:
    text = text.strip()
    if text == "loglacunary":
        return Symbol.coerce(loglacunary(order))
    if "/" in text:
        num, den = text.split("/", 1)
        return Symbol.rational(_coeff_list(num), _coeff_list(den))
    return Symbol.polynomial(_coeff_list(text))


def parse_phi(text: str):
    kind, _, arg = text.strip().partition(":")
    if kind == "identity":
        return Moebius.identity()
    if kind == "half":
        return Moebius(-1, 1, 0, 2)
    if kind == "rotation":
        return Moebius.rotation(float(arg))
    if kind == "rotation-frac":
        return Moebius.rotation(2 * math.pi * float(Fraction(arg)))
    if kind == "parabolic":
        return parabolic_normal_form(float(arg), 1)
    if kind == "hyperbolic":
        return hyperbolic_normal_form(float(arg), 1)
    if kind == "auto":
        p, theta = arg.rsplit(",", 1)
        return Moebius.from_p_theta(parse_complex(p), float(theta))
    raise ValueError(f"unknown automorphism spec {text!r}")


def _int_list(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def _dyadic(lo: int, hi: int) -> list:
    out, n = [], lo
    while n <= hi:
        out.append(n)
        n *= 2
    return out


def _pair(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _emit(args, payload: dict, rows=None, header=None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.json:
        Path(args.json).write_text(text + "\n")
    else:
        print(text)
    if args.csv and rows is not None:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)


# subcommands -----------------------------------------------------------------


def cmd_classify(args) -> int:
    p = parse_complex(args.p)
    if abs(p) >= 1:
        raise ValueError("|p| must be < 1")
    cls = classify(Moebius.from_p_theta(p, args.theta), tol=args.tol)
    payload = {
        "kind": cls.kind,
        "fixed_points": [_pair(z) for z in cls.fixed_points if np.isfinite(z)],
        "multiplier": cls.multiplier,
        "gap": cls.gap,
        "in_parabolic_band": cls.in_band,
        "rotation_fraction": list(cls.rotation_fraction) if cls.rotation_fraction else None,
        "p": _pair(p),
        "theta": args.theta,
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_decompose(args) -> int:
    zeros = [parse_complex(z) for z in args.zeros.split(",")]
    B = BlaschkeProduct(tuple(zeros))
    if not B.vanishes_at_origin():
        raise ValueError("the Blaschke product must satisfy B(0)=0 (include 0 among the zeros)")
    if args.f:
        f = Series(_coeff_list(args.f)).truncate(args.order)
    else:
        rng = np.random.default_rng(args.seed)
        f = random_polynomial(rng, args.random_degree, args.order)
    d = decompose(f, B, args.K)
    norms = d.block_norms()
    total = seq_norm(f, "hardy") ** 2
    parseval = abs(float(np.sum(norms**2)) - total) / total if total else 0.0
    payload = {
        "zeros": [_pair(z) for z in zeros],
        "order": args.order,
        "blocks": d.blocks,
        "block_norms": [float(x) for x in norms],
        "parseval_residual": parseval,
        "residual": d.residual,
        "space": args.space,
        "frame_ratio": frame_ratio(f, d, args.space),
        "seed": args.seed,
    }
    _emit(args, payload, [(k, repr(float(x))) for k, x in enumerate(norms)], ["k", "norm"])
    if args.check and parseval > 1e-8:
        raise CheckFailed(f"Parseval residual {parseval:.3e} exceeds 1e-8")
    return EXIT_OK


def cmd_multnorm(args) -> int:
    Ns = _int_list(args.N_list) if args.N_list else _dyadic(64, args.order)
    spec = args.preset or args.u
    if spec is None:
        raise ValueError("give --u or --preset")
    w = as_space(args.space)
    half = Moebius(-1, 1, 0, 2)
    rows = []
    for N in Ns:
        u = parse_symbol(spec, N)
        if args.compose_half:
            value = largest_singular_value(compress(Wco(u, half), w, N).matrix)
        else:
            value = multiplier_norm(u, w, N)
        rows.append((N, value))
    payload = {
        "u": spec,
        "space": str(w),
        "compose_half": bool(args.compose_half),
        "rows": [[int(n), float(v)] for n, v in rows],
        "growth_ratio": rows[-1][1] / rows[0][1],
    }
    _emit(args, payload, [(n, repr(float(v))) for n, v in rows], ["N", "norm"])
    if args.check and any(b[1] <= a[1] for a, b in zip(rows, rows[1:])) and not args.compose_half:
        raise CheckFailed("multiplier norms are not strictly increasing")
    return EXIT_OK


def _build_wco(args) -> Wco:
    return Wco(parse_symbol(args.h, args.order), parse_phi(args.phi))


def _check_report(rep) -> list:
    failures = []
    model = rep.predicted
    if model is None:
        return [rep.metadata.get("prediction_error", "no prediction")]
    lo, hi = RADIUS_BRACKET
    if model.shape in ("circle", "annulus") and rep.radius is not None:
        r = rep.radius.limit_guess
        ri = rep.inverse_radius.limit_guess if rep.inverse_radius else None
        if model.shape == "circle":
            R = model.params["radius"]
            if not lo * R <= r <= hi * R:
                failures.append(f"radius {r:.4g} outside [{lo * R:.4g}, {hi * R:.4g}]")
            if ri is not None and not lo / R <= ri <= hi / R:
                failures.append(f"inverse radius {ri:.4g} outside [{lo / R:.4g}, {hi / R:.4g}]")
        else:
            if r > hi * model.params["r_out"]:
                failures.append(f"radius {r:.4g} above {hi} r_out")
            if ri is not None and 1 / ri < lo * model.params["r_in"]:
                failures.append(f"inverse radius {ri:.4g} below {lo} r_in")
    elif rep.distances is not None and np.max(rep.distances) > 1e-8:
        failures.append(f"eigenvalue off the predicted set by {np.max(rep.distances):.3e}")
    return failures


def cmd_spectrum(args) -> int:
    W = _build_wco(args)
    n_list = _int_list(args.n_list)
    if args.check and not W.phi.is_automorphism():
        raise ValueError("--check needs an automorphism phi")
    rep = spectrum_report(W, args.space, args.order, n_list)
    payload = rep.to_dict()
    payload["metadata"]["h"] = args.h
    payload["metadata"]["phi"] = args.phi
    payload["metadata"]["seed"] = args.seed
    _emit(args, payload, [(repr(float(z.real)), repr(float(z.imag))) for z in rep.eigenvalues], ["re", "im"])
    if args.check:
        failures = _check_report(rep)
        if failures:
            raise CheckFailed("; ".join(failures))
    return EXIT_OK


def cmd_radius(args) -> int:
    W = _build_wco(args)
    seq = radius_sequence(W, args.space, args.order, _int_list(args.n_list))
    payload = {"h": args.h, "phi": args.phi, "N": args.order, "space": args.space, "radius_sequence": seq.to_list()}
    _emit(args, payload, [(n, repr(r)) for n, r in seq.to_list()], ["n", "r_n"])
    return EXIT_OK


def cmd_probe_growth(args) -> int:
    ns = _int_list(args.n_list) if args.n_list else _dyadic(args.n_min, args.n_max)
    table = growth_probe(args.kind, args.param, ns)
    payload = {
        "kind": args.kind,
        "param": args.param,
        "rows": [[n, float(s), float(v)] for n, s, v in table.rows],
        "normalized_min": float(table.normalized.min()),
        "normalized_max": float(table.normalized.max()),
        "spread": table.spread,
    }
    _emit(args, payload, [(n, repr(float(s)), repr(float(v))) for n, s, v in table.rows], ["n", "sup", "normalized"])
    if args.check and table.spread >= 4:
        raise CheckFailed(f"normalized spread {table.spread:.4g} >= 4")
    return EXIT_OK


def cmd_probe_annulus(args) -> int:
    phi = hyperbolic_normal_form(args.mu, 1) if args.phi is None else parse_phi(args.phi)
    W = Wco(parse_symbol(args.h, args.order), phi)
    report = annulus_probe(W, args.space, _int_list(args.N_list), _int_list(args.n_list), delta=args.delta)
    rows = [(run["N"], repr(run["containment_fraction"])) for run in report["runs"]]
    _emit(args, report, rows, ["N", "containment_fraction"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--order", type=int, default=256, help="truncation order N (default 256)")
    common.add_argument("--space", choices=["dirichlet", "hardy", "bergman"], default="dirichlet")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", metavar="PATH", help="also write a CSV projection")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--check", action="store_true", help="exit 2 when acceptance checks fail")

    parser = _Parser(prog="dirichlet-wco", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify e^{i theta}(p - z)/(1 - conj(p) z)")
    p.add_argument("--p", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-7, help="parabolic band half-width (default 1e-7)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", parents=[common], help="block decomposition over a Blaschke product")
    p.add_argument("--zeros", required=True, help="comma-separated zeros, must include 0")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--f", help="coefficient list of f")
    src.add_argument("--random-degree", type=int, help="random polynomial of this degree (uses --seed)")
    p.add_argument("--K", type=int, default=None, help="block count")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("multnorm", parents=[common], help="multiplier-norm sweep over N")
    p.add_argument("--u")
    p.add_argument("--preset", choices=["loglacunary"])
    p.add_argument("--N-list", dest="N_list", help="comma-separated orders (default dyadic 64..order)")
    p.add_argument("--compose-half", action="store_true", help="use T_u C_phi with phi = (1 - z)/2")
    p.set_defaults(func=cmd_multnorm)

    for name, func, helptext in (("spectrum", cmd_spectrum, "spectrum report"), ("radius", cmd_radius, "radius sequence")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--h", required=True)
        p.add_argument("--phi", required=True)
        p.add_argument("--n-list", default="1,2,4,8,16,32,64")
        p.set_defaults(func=func)

    p = sub.add_parser("probe-growth", parents=[common], help="sup|phi_n'| along normal-form iterates")
    p.add_argument("--kind", choices=["parabolic", "hyperbolic", "elliptic"], required=True)
    p.add_argument("--param", type=float, required=True, help="y, mu or the rotation angle")
    p.add_argument("--n-list")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=64)
    p.set_defaults(func=cmd_probe_growth)

    p = sub.add_parser("probe-annulus", parents=[common], help="exploratory hyperbolic annulus probe")
    p.add_argument("--h", default="1")
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--phi", default=None, help="overrides --mu")
    p.add_argument("--N-list", dest="N_list", default="64,128,256")
    p.add_argument("--n-list", default="8,16,32")
    p.add_argument("--delta", type=float, default=0.15)
    p.set_defaults(func=cmd_probe_annulus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
