"""Command-line front end: single-metric reports, isometry tests, sweeps.

Metrics enter either as JSON files (6x6 array of entries; strings like
"3/2" are parsed as exact rationals) or as named canonical families with
parameters.  Reports are JSON on stdout; sweeps emit one JSON line per
grid point in deterministic order.  Exit codes: 0 success, 2 validation
error, 3 reduction residual above tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import affine, catalog, distinguished, liealg, linalg, reduction
from . import curvature as curvature_mod
from . import holonomy as holonomy_mod
from . import metric as metric_mod
from .metric import MetricMatrix
from .scalars import EXACT, float_backend, scalar_to_json, as_fraction

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESIDUAL = 3


class ValidationError(Exception):
    pass


def _parse_params(spec: str, family: str) -> dict:
    fam = catalog.FAMILIES.get(family)
    if fam is None:
        raise ValidationError(f"unknown family {family!r}; see the families command")
    if not spec:
        return {}
    items = [s.strip() for s in spec.split(",") if s.strip()]
    out: dict = {}
    if any("=" in s for s in items):
        for s in items:
            if "=" not in s:
                raise ValidationError(f"mixed positional/named parameter {s!r}")
            k, v = s.split("=", 1)
            out[k.strip()] = _parse_value(v.strip())
        return out
    # positional: parameters first, then sign slots as +/-
    names = list(fam.param_names) + list(fam.sign_names)
    if len(items) > len(names):
        raise ValidationError(
            f"{family} takes at most {len(names)} parameters {names}")
    for name, v in zip(names, items):
        out[name] = _parse_value(v)
    return out


def _parse_value(v: str):
    if v in ("+", "+1"):
        return 1
    if v in ("-", "-1"):
        return -1
    return Fraction(v)


def _load_metric(args) -> tuple[MetricMatrix, dict]:
    backend = EXACT if args.backend == "exact" else float_backend(args.tolerance)
    if args.family:
        params = _parse_params(args.params or "", args.family)
        try:
            g = catalog.construct(args.family, params, backend)
        except catalog.ConstraintError as exc:
            raise ValidationError(str(exc)) from exc
        echo = {"family": args.family,
                "params": {k: scalar_to_json(v) if not isinstance(v, int) else v
                           for k, v in params.items()}}
        return g, echo
    if args.infile:
        raw = sys.stdin.read() if args.infile == "-" else open(args.infile).read()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed JSON: {exc}") from exc
        rows = data["metric"] if isinstance(data, dict) else data
        try:
            if backend.exact:
                entries = [[as_fraction(x) for x in row] for row in rows]
            else:
                entries = [[float(Fraction(x)) if isinstance(x, str) else float(x)
                            for x in row] for row in rows]
            g = MetricMatrix(linalg.mat(entries), backend)
        except (ValueError, TypeError, metric_mod.NotSymmetricError,
                metric_mod.DegenerateMetricError) as exc:
            raise ValidationError(str(exc)) from exc
        return g, {"metric": g.to_json()}
    raise ValidationError("provide --family or --in")


def _json_scalar(x):
    if isinstance(x, int):
        return x
    return scalar_to_json(x)


def _json_matrix(m):
    return [[_json_scalar(x) for x in row] for row in m]


def _json_vector(v):
    return [_json_scalar(x) for x in v]


def build_report(g: MetricMatrix, echo: dict) -> dict:
    alg = liealg.tstar_h3()
    t0 = time.perf_counter()
    backend = g.backend

    desc = reduction.classify(g)

    conn = curvature_mod.levi_civita(alg, g)
    rt = curvature_mod.curvature(conn)
    preds = curvature_mod.predicates(alg, g)
    nonzero_r = {}
    for i in range(6):
        for j in range(i + 1, 6):
            op = rt.r[i][j]
            if any(not backend.is_zero(x) for row in op for x in row):
                co = curvature_mod.wedge_coordinates(alg, g, op, backend)
                if co is not None:
                    nonzero_r[f"R(e{i+1},e{j+1})"] = {
                        f"e{a}^e{b}": _json_scalar(c)
                        for (a, b), c in co.items() if not backend.is_zero(c)}

    span = holonomy_mod.holonomy_algebra(alg, g)
    rep = holonomy_mod.lie_structure(span)

    par = distinguished.parallel_fields(alg, g)
    pp = distinguished.pp_wave_check(alg, g)
    sol = distinguished.nilsoliton(alg, g)
    jcan = distinguished.canonical_complex_structure()
    aff = affine.aff_space(alg, g)

    elapsed = time.perf_counter() - t0
    report = {
        "input": echo,
        "backend": desc.backend_note,
        "descriptor": desc.to_json(),
        "curvature": {
            "connection": {f"nabla_e{i+1}(e{j+1})": _json_vector(conn.gamma[i][j])
                           for i in range(6) for j in range(6)
                           if any(not backend.is_zero(x) for x in conn.gamma[i][j])},
            "nonzero_curvature_operators": nonzero_r,
            "ricci": _json_matrix(rt.ricci),
            "scalar_curvature": _json_scalar(rt.scalar),
            "flags": {
                "flat": preds.is_flat,
                "ricci_flat": preds.is_ricci_flat,
                "locally_symmetric": preds.is_locally_symmetric,
                "ricci_parallel": preds.is_ricci_parallel,
                "einstein": preds.is_einstein,
            },
        },
        "holonomy": {
            "dimension": span.dimension,
            "generators": span.generation_log,
            "abelian": rep.is_abelian,
            "nilpotent": rep.is_nilpotent,
            "nilpotency_step": rep.nilpotency_step,
            "derived_series_dims": list(rep.derived_series_dims),
            "radical_dim": rep.radical_dim,
            "nilradical_dim": rep.nilradical_dim,
            "full_so": rep.is_full_so,
        },
        "distinguished": {
            "parallel_dimension": par.dimension,
            "parallel_basis": [_json_vector(v) for v in par.basis],
            "pp_wave": pp.is_pp_wave,
            "pp_wave_witness": _json_vector(pp.witness) if pp.witness else None,
            "soliton": None if sol is None else {
                "gamma": _json_scalar(sol.gamma), "kind": sol.kind},
            "pseudo_kahler": distinguished.is_pseudo_kahler(alg, g, jcan),
            "ad_invariant": distinguished.is_ad_invariant(alg, g),
        },
        "affine": {
            "aff_dimension": aff.dimension,
            "geodesically_rigid": aff.dimension == 1,
        },
        "timing_seconds": round(elapsed, 6),
    }
    return report


def cmd_report(args) -> int:
    try:
        g, echo = _load_metric(args)
    except ValidationError as exc:
        _emit({"error": str(exc)}, args)
        return EXIT_VALIDATION
    try:
        report = build_report(g, echo)
    except reduction.ReductionError as exc:
        _emit({"error": str(exc)}, args)
        return EXIT_RESIDUAL
    _emit(report, args)
    return EXIT_OK


def cmd_isometric(args) -> int:
    backend = EXACT if args.backend == "exact" else float_backend(args.tolerance)

    def load(spec):
        fam, _, p = spec.partition(":")
        if fam in catalog.FAMILIES:
            return catalog.construct(fam, _parse_params(p, fam), backend)
        raw = open(spec).read()
        rows = json.loads(raw)
        rows = rows["metric"] if isinstance(rows, dict) else rows
        conv = as_fraction if backend.exact else (
            lambda x: float(Fraction(x)) if isinstance(x, str) else float(x))
        return MetricMatrix(linalg.mat([[conv(x) for x in r] for r in rows]), backend)

    try:
        g1, g2 = load(args.first), load(args.second)
    except (ValidationError, catalog.ConstraintError, OSError,
            json.JSONDecodeError, metric_mod.NotSymmetricError,
            metric_mod.DegenerateMetricError) as exc:
        _emit({"error": str(exc)}, args)
        return EXIT_VALIDATION
    try:
        d1 = reduction.classify(g1)
        d2 = reduction.classify(g2)
    except reduction.ReductionError as exc:
        _emit({"error": str(exc)}, args)
        return EXIT_RESIDUAL
    verdict = reduction.descriptors_match(d1, d2)
    _emit({"isometric": verdict,
           "first": d1.to_json(), "second": d2.to_json()}, args)
    return EXIT_OK


def _sweep_grid(args) -> list[tuple[str, dict]]:
    if args.family:
        fam = catalog.FAMILIES.get(args.family)
        if fam is None:
            raise ValidationError(f"unknown family {args.family!r}")
        if not args.params:
            return [(f, p) for f, p in catalog.enumerate_test_grid()
                    if f == args.family]
        axes: list[tuple[str, list]] = []
        for item in args.params.split(","):
            k, _, vals = item.partition("=")
            axes.append((k.strip(), [_parse_value(v) for v in vals.split(":")]))
        points: list[dict] = [{}]
        for k, vals in axes:
            points = [dict(p, **{k: v}) for p in points for v in vals]
        return [(args.family, p) for p in points]
    return catalog.enumerate_test_grid()


def cmd_sweep(args) -> int:
    backend = EXACT if args.backend == "exact" else float_backend(args.tolerance)
    try:
        grid = _sweep_grid(args)
    except ValidationError as exc:
        _emit({"error": str(exc)}, args)
        return EXIT_VALIDATION

    def run(point):
        family, params = point
        try:
            g = catalog.construct(family, params, backend)
            rep = build_report(g, {"family": family, "params": {
                k: _json_scalar(v) for k, v in params.items()}})
            return rep
        except Exception as exc:  # partial failures keep the stream going
            return {"input": {"family": family, "params": {
                k: _json_scalar(v) for k, v in params.items()}},
                "error": f"{type(exc).__name__}: {exc}"}

    out = sys.stdout if not args.outfile else open(args.outfile, "w")
    try:
        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
            for rep in pool.map(run, grid):
                out.write(json.dumps(rep, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_families(args) -> int:
    listing = {}
    for name, spec in catalog.FAMILIES.items():
        listing[name] = {
            "parameters": list(spec.param_names),
            "signs": list(spec.sign_names),
            "constraints": spec.constraints,
        }
    _emit(listing, args)
    return EXIT_OK


def _emit(obj, args):
    text = json.dumps(obj, indent=None if getattr(args, "compact", False) else 2,
                      sort_keys=True)
    if getattr(args, "outfile", None):
        with open(args.outfile, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tstarh3",
        description="Pseudo-Riemannian geometry of left invariant metrics on "
                    "the cotangent algebra of the Heisenberg algebra")
    ap.set_defaults(func=None)
    sub = ap.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--backend", choices=("exact", "float"), default="exact")
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", dest="outfile")
        p.add_argument("--compact", action="store_true")

    p = sub.add_parser("report", help="full geometric report for one metric")
    p.add_argument("--family")
    p.add_argument("--params")
    p.add_argument("--in", dest="infile", help="metric JSON file ('-' for stdin)")
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("isometric", help="decide whether two metrics are isometric")
    p.add_argument("first", help="metric file or FAMILY:params spec")
    p.add_argument("second", help="metric file or FAMILY:params spec")
    common(p)
    p.set_defaults(func=cmd_isometric)

    p = sub.add_parser("sweep", help="JSONL reports over a parameter grid")
    p.add_argument("--family")
    p.add_argument("--params", help="axis spec like s22=1:2:3,s33=1:-1")
    p.add_argument("--jobs", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("families", help="list canonical families and parameters")
    common(p)
    p.set_defaults(func=cmd_families)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    if args.func is None:
        ap.print_help()
        return EXIT_VALIDATION
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
