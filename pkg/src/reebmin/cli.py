"""Command-line front end: subcommands, JSON/CSV reports, batch pipelines.

JSON is the machine contract (deterministic: sorted keys, shortest
round-trip float repr, exact rationals as "p/q" strings); the table format
is for humans only.  A batch file is newline-delimited JobSpec JSON and is
processed in input order, one report line per spec, errors confined to
their line.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, cones, latcore, links, obstruct, reebvol, ypq
from .errors import ReebminError, SchemaError

COMMANDS = (
    "cone-minimize",
    "cone-topology",
    "link-check",
    "link-enumerate",
    "obstruct-hs",
    "join",
    "ypq",
    "labc",
    "gale-dual",
)


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _need(payload, key, kind, what=""):
    if key not in payload:
        raise SchemaError(f"missing field {key!r}{what}")
    val = payload[key]
    if kind is int and isinstance(val, bool):
        raise SchemaError(f"field {key!r} must be an integer")
    if not isinstance(val, kind):
        raise SchemaError(f"field {key!r} has wrong type, expected {kind}")
    return val


def _int_list(payload, key):
    val = _need(payload, key, list)
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in val):
        raise SchemaError(f"field {key!r} must be a list of integers")
    return val


def _cone_payload(payload) -> cones.MomentCone:
    data = _need(payload, "cone", dict)
    normals = _need(data, "normals", list)
    return cones.validate_cone(normals)


# --- command handlers -------------------------------------------------------


def _run_cone_minimize(payload):
    cone = _cone_payload(payload)
    g = cones.gorenstein_normalize(cone)
    res = reebvol.minimize_reeb(g)
    exact = payload.get("exact_certify", False)
    results = {
        "xi_star": list(res.xi_star),
        "normalized_volume": res.normalized_volume,
        "sasakian_volume": res.sasakian_volume,
        "regularity": res.regularity,
        "rank": res.rank,
        "iterations": res.iterations,
        "gradient_norm": res.gradient_norm,
        "gorenstein_ell": g.ell,
        "basis_change": [list(r) for r in g.basis_change],
    }
    if exact:
        results["xi_star_exact"] = (
            list(res.xi_star_exact) if res.xi_star_exact else None
        )
        results["normalized_volume_exact"] = res.normalized_volume_exact
    return results, {"gradient_norm": reebvol.GRAD_TOL}, False


def _run_cone_topology(payload):
    cone = _cone_payload(payload)
    top = cones.topology(cone)
    results = {
        "pi1_invariants": list(top.pi1_invariants),
        "pi2_rank": top.pi2_rank,
        "simply_connected": top.simply_connected,
    }
    if cone.n == 3 and top.simply_connected:
        smale = cones.smale_type(cone)
        results["smale"] = {"k": smale.k, "label": smale.label}
    return results, {}, False


def _run_link_check(payload):
    a = _int_list(payload, "exponents")
    verdict = links.link_verdict(a)
    return verdict.to_dict(), {}, verdict.outcome == links.OBSTRUCTED


def _run_link_enumerate(payload):
    template = _need(payload, "template", list)
    template = [None if t is None else int(t) for t in template]
    lo, hi = _int_list(payload, "range")
    pred_spec = payload.get("predicate")
    pred = links.parse_predicate(pred_spec) if pred_spec else None
    hits = links.enumerate_family(
        template, range(lo, hi + 1), pred, workers=int(payload.get("workers", 1))
    )
    return (
        {
            "count": len(hits),
            "values": [k for k, _ in hits],
            "verdicts": [v.to_dict() for _, v in hits],
        },
        {},
        False,
    )


def _run_obstruct_hs(payload):
    h = obstruct.WeightedHS(
        weights=tuple(_int_list(payload, "weights")),
        degree=_need(payload, "degree", int),
    )
    volume, normalized = obstruct.hs_volume(h)
    lich = obstruct.lichnerowicz_check(h)
    bishop = obstruct.bishop_check(h)
    results = {
        "weights": list(h.weights),
        "degree": h.degree,
        "volume": volume,
        "normalized_volume": normalized,
        "bishop": bishop,
        "lichnerowicz": {
            "status": lich.status,
            "witness_index": lich.witness_index,
            "charge": lich.charge,
            "eigenvalue": lich.eigenvalue,
        },
    }
    strict_fail = obstruct.OBSTRUCTED in (bishop, lich.status)
    return results, {}, strict_fail


def _run_join(payload):
    ords = _int_list(payload, "ord")
    idxs = _int_list(payload, "index")
    ns = _int_list(payload, "n")
    if not len(ords) == len(idxs) == len(ns) == 2:
        raise SchemaError("join needs exactly two factors")
    res = obstruct.join_smooth(
        obstruct.JoinInput(order=ords[0], fano_index=idxs[0], n=ns[0]),
        obstruct.JoinInput(order=ords[1], fano_index=idxs[1], n=ns[1]),
    )
    return (
        {
            "kind": res.kind,
            "dimension": res.dimension,
            "relative_indices": [res.l1, res.l2],
            "obstruction_gcd": res.obstruction_gcd,
        },
        {},
        not res.smooth,
    )


def _run_ypq(payload):
    p = _need(payload, "p", int)
    q = _need(payload, "q", int)
    Y = ypq.ypq_params(p, q)
    reg = ypq.quasiregular_check(p, q)
    results = {
        "p": p,
        "q": q,
        "a": Y.a,
        "roots": [Y.y1, Y.y2, Y.y3],
        "regularity": reg.kind,
        "m": reg.m,
    }
    tolerances = {}
    strict_fail = False
    if payload.get("check_einstein", False):
        samples = int(payload.get("samples", 20))
        step = float(payload.get("step", 1e-3))
        seed = int(payload.get("seed", 0))
        rng = random.Random(seed)
        pts = ypq.random_chart_points(Y, samples, rng)
        res = [ypq.einstein_residual(Y, x, h=step) for x in pts]
        kil = [ypq.killing_residual(Y, x) for x in pts]
        eta = [ypq.reeb_norm_residual(Y, x) for x in pts]
        tolerances = {"einstein": 1e-4, "killing": 1e-6, "eta": 1e-6}
        ok = (
            max(res) <= 1e-4 and max(kil) <= 1e-6 and max(eta) <= 1e-6
        )
        results["einstein"] = {
            "samples": samples,
            "step": step,
            "seed": seed,
            "max_residual": max(res),
            "mean_residual": sum(res) / len(res),
            "killing_max": max(kil),
            "eta_max": max(eta),
            "pass": ok,
        }
        strict_fail = not ok
    return results, tolerances, strict_fail


def _run_labc(payload):
    a = _need(payload, "a", int)
    b = _need(payload, "b", int)
    c = _need(payload, "c", int)
    verdict = ypq.labc_admissible(a, b, c)
    results = {
        "valid": verdict.valid,
        "reasons": list(verdict.reasons),
    }
    if verdict.valid:
        results["d"] = verdict.params.d
        results["charges"] = list(verdict.params.charges)
        if payload.get("to_cone", False):
            g = ypq.labc_cone(verdict.params)
            top = cones.topology(g.cone)
            results["cone"] = g.cone.to_dict()
            results["topology"] = {
                "pi1_invariants": list(top.pi1_invariants),
                "pi2_rank": top.pi2_rank,
            }
    return results, {}, not verdict.valid


def _run_gale_dual(payload):
    charges = _need(payload, "charges", list)
    if charges and isinstance(charges[0], int):
        charges = [charges]
    ncols = payload.get("ncols")
    rays = latcore.gale_dual([list(map(int, row)) for row in charges], ncols=ncols)
    return {"rays": [list(r) for r in rays]}, {}, False


_HANDLERS = {
    "cone-minimize": _run_cone_minimize,
    "cone-topology": _run_cone_topology,
    "link-check": _run_link_check,
    "link-enumerate": _run_link_enumerate,
    "obstruct-hs": _run_obstruct_hs,
    "join": _run_join,
    "ypq": _run_ypq,
    "labc": _run_labc,
    "gale-dual": _run_gale_dual,
}


def run(spec: dict, timing: bool = False) -> dict:
    """Execute one JobSpec and return its Report dictionary.

    The report embeds the input payload verbatim for provenance; numeric
    fields carry the tolerance they were checked at.
    """
    if not isinstance(spec, dict):
        raise SchemaError("jobspec must be an object")
    command = spec.get("command")
    if command not in _HANDLERS:
        raise SchemaError(f"unknown command {command!r}")
    payload = spec.get("payload", {})
    if not isinstance(payload, dict):
        raise SchemaError("payload must be an object")
    started = time.perf_counter()
    results, tolerances, strict_fail = _HANDLERS[command](payload)
    report = {
        "command": command,
        "input": payload,
        "results": results,
        "tolerances": tolerances,
        "strict_fail": strict_fail,
        "version": __version__,
    }
    if timing:
        report["timing_ms"] = 1000.0 * (time.perf_counter() - started)
    return report


def _error_report(spec, exc) -> dict:
    return {
        "command": spec.get("command") if isinstance(spec, dict) else None,
        "error": {"code": type(exc).__name__, "message": str(exc)},
        "version": __version__,
    }


# --- output formatting ------------------------------------------------------


def _emit_json(report, out):
    out.write(json.dumps(_jsonable(report), sort_keys=True, indent=2))
    out.write("\n")


def _emit_table(report, out, prefix=""):
    items = _jsonable(report)

    def walk(d, indent):
        for k in sorted(d):
            v = d[k]
            if isinstance(v, dict):
                out.write(f"{' ' * indent}{k}:\n")
                walk(v, indent + 2)
            else:
                out.write(f"{' ' * indent}{k}: {v}\n")

    walk(items, 0)


def _emit_csv(report, out):
    results = _jsonable(report.get("results", {}))
    verdicts = results.get("verdicts")
    if verdicts:
        cols = sorted({k for v in verdicts for k in v})
        out.write(",".join(cols) + "\n")
        for v in verdicts:
            out.write(",".join(_csv_cell(v.get(c)) for c in cols) + "\n")
    else:
        flat = _flatten(results)
        out.write(",".join(flat) + "\n")
        out.write(",".join(_csv_cell(results[k]) for k in flat) + "\n")


def _flatten(d):
    return sorted(k for k, v in d.items() if not isinstance(v, (dict, list)))


def _csv_cell(v):
    s = "" if v is None else str(v)
    if "," in s or '"' in s:
        s = '"' + s.replace('"', '""') + '"'
    return s


def _emit(report, fmt, out):
    if fmt == "table":
        _emit_table(report, out)
    elif fmt == "csv":
        _emit_csv(report, out)
    else:
        _emit_json(report, out)


# --- argument parsing -------------------------------------------------------


def _ints_csv(text):
    return [int(t) for t in str(text).replace(" ", "").split(",") if t != ""]


def _template_csv(text):
    out = []
    for t in str(text).replace(" ", "").split(","):
        out.append(None if t in ("_", "?") else int(t))
    return out


def _range_arg(text):
    lo, _, hi = str(text).partition("..")
    if not hi:
        raise SchemaError("range must look like 5..41")
    return [int(lo), int(hi)]


def _load_cone_arg(args) -> dict:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            data = json.load(fh)
    elif args.normals:
        rows = [
            _ints_csv(part) for part in args.normals.replace(" ", "").split(";")
        ]
        data = {"n": len(rows[0]), "normals": rows}
    else:
        raise SchemaError("give --input cone.json or --normals 'a,b;c,d;...'")
    return {"cone": data}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reebmin",
        description="Sasaki-Einstein existence tests: toric Reeb-volume "
        "minimization, Brieskorn-Pham links, obstructions, Y^{p,q} metrics.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table", "csv"), default="json")
    common.add_argument("--strict", action="store_true",
                        help="exit 2 on an obstructed/fail verdict")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timing in reports")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized verification sampling")

    sub = parser.add_subparsers(dest="group", required=True)

    cone = sub.add_parser("cone", help="moment cone analysis").add_subparsers(
        dest="action", required=True
    )
    for action in ("minimize", "topology"):
        p = cone.add_parser(action, parents=[common])
        p.add_argument("--input", help="cone JSON file {n, normals}")
        p.add_argument("--normals", help="inline normals 'a,b;c,d;...'")
        if action == "minimize":
            p.add_argument("--exact-certify", action="store_true",
                           help="report exact rational minimizer data")

    link = sub.add_parser("link", help="Brieskorn-Pham links").add_subparsers(
        dest="action", required=True
    )
    p = link.add_parser("check", parents=[common])
    p.add_argument("exponents", help="comma-separated exponents, e.g. 2,3,7,5")
    p = link.add_parser("enumerate", parents=[common])
    p.add_argument("--template", required=True,
                   help="exponents with one free slot, e.g. 2,3,7,_")
    p.add_argument("--range", required=True, help="inclusive range lo..hi")
    p.add_argument("--predicate", default=None,
                   help="named predicate(s), '+'-conjoined: bgk, gk+bgk-fail, ...")
    p.add_argument("--workers", type=int, default=1)

    obst = sub.add_parser("obstruct", help="volume/eigenvalue obstructions")
    obs_sub = obst.add_subparsers(dest="action", required=True)
    p = obs_sub.add_parser("hs", parents=[common])
    p.add_argument("--weights", required=True, help="comma-separated weights")
    p.add_argument("--degree", required=True, type=int)

    p = sub.add_parser("join", parents=[common], help="join smoothness test")
    p.add_argument("--ord", required=True, help="orbifold orders, e.g. 1,1")
    p.add_argument("--index", required=True, help="Fano indices, e.g. 2,2")
    p.add_argument("--n", required=True, help="half-dimensions n_i, e.g. 2,2")

    p = sub.add_parser("ypq", parents=[common], help="explicit Y^{p,q} metrics")
    p.add_argument("--p", required=True, type=int)
    p.add_argument("--q", required=True, type=int)
    p.add_argument("--check-einstein", action="store_true")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--step", type=float, default=1e-3)

    p = sub.add_parser("labc", parents=[common], help="L^{a,b,c} admissibility")
    p.add_argument("--a", required=True, type=int)
    p.add_argument("--b", required=True, type=int)
    p.add_argument("--c", required=True, type=int)
    p.add_argument("--to-cone", action="store_true",
                   help="emit the Gorenstein moment cone")

    p = sub.add_parser("gale-dual", parents=[common], help="charge matrix to rays")
    p.add_argument("--charges", required=True,
                   help="rows ';'-separated, entries ','-separated")

    p = sub.add_parser("batch", parents=[common],
                       help="run newline-delimited JobSpec JSON")
    p.add_argument("file", help="ndjson file of jobspecs, or - for stdin")
    return parser


def _spec_from_args(args) -> dict:
    group = args.group
    if group == "cone":
        payload = _load_cone_arg(args)
        if args.action == "minimize":
            payload["exact_certify"] = args.exact_certify
            return {"command": "cone-minimize", "payload": payload}
        return {"command": "cone-topology", "payload": payload}
    if group == "link":
        if args.action == "check":
            return {
                "command": "link-check",
                "payload": {"exponents": _ints_csv(args.exponents)},
            }
        return {
            "command": "link-enumerate",
            "payload": {
                "template": _template_csv(args.template),
                "range": _range_arg(args.range),
                "predicate": args.predicate,
                "workers": args.workers,
            },
        }
    if group == "obstruct":
        return {
            "command": "obstruct-hs",
            "payload": {"weights": _ints_csv(args.weights), "degree": args.degree},
        }
    if group == "join":
        return {
            "command": "join",
            "payload": {
                "ord": _ints_csv(args.ord),
                "index": _ints_csv(args.index),
                "n": _ints_csv(args.n),
            },
        }
    if group == "ypq":
        return {
            "command": "ypq",
            "payload": {
                "p": args.p,
                "q": args.q,
                "check_einstein": args.check_einstein,
                "samples": args.samples,
                "step": args.step,
                "seed": args.seed,
            },
        }
    if group == "labc":
        return {
            "command": "labc",
            "payload": {"a": args.a, "b": args.b, "c": args.c,
                        "to_cone": args.to_cone},
        }
    if group == "gale-dual":
        rows = [_ints_csv(part) for part in args.charges.split(";")]
        return {"command": "gale-dual", "payload": {"charges": rows}}
    raise SchemaError(f"unhandled group {group!r}")


def _run_batch(args, out) -> int:
    if args.file == "-":
        lines = sys.stdin.read().splitlines()
    else:
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    worst = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            spec = json.loads(line)
        except json.JSONDecodeError as exc:
            _emit_line(_error_report({}, SchemaError(f"bad JSON: {exc}")), out)
            worst = max(worst, 1)
            continue
        try:
            report = run(spec, timing=args.timing)
        except (ReebminError, ValueError) as exc:
            _emit_line(_error_report(spec, exc), out)
            worst = max(worst, 1)
            continue
        _emit_line(report, out)
        if args.strict and report.get("strict_fail"):
            worst = max(worst, 2)
    return worst


def _emit_line(report, out):
    out.write(json.dumps(_jsonable(report), sort_keys=True))
    out.write("\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    if args.group == "batch":
        return _run_batch(args, out)
    try:
        spec = _spec_from_args(args)
        report = run(spec, timing=args.timing)
    except (ReebminError, ValueError, OSError, json.JSONDecodeError) as exc:
        _emit(_error_report({}, exc), args.format, out)
        return 1
    _emit(report, args.format, out)
    if args.strict and report.get("strict_fail"):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
