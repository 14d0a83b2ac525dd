"""``tropmon`` command line.

Exit codes: 0 success, 1 a domain verdict (not representable, inaccessible,
failed hypothesis), 2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import constructions as C
from . import reductions as R
from .errors import (
    InvalidBounds,
    InvalidConeData,
    InvalidType,
    NotConvex,
    NotLattice,
    TropmonError,
)
from .presentations import Bipartition, Presentation, find_bipartition, sanitize
from .torification import ToricMonoid, minimal_generator_count, saturate, toric_equal, torify
from .tropical_types import TropicalType, is_representable, tropical_monoid, validate

INPUT_ERRORS = (InvalidType, InvalidBounds, InvalidConeData, NotConvex, NotLattice)


class InputError(Exception):
    pass


class Verdict(Exception):
    """Raised with a payload when the answer is negative but well defined."""

    def __init__(self, payload):
        super().__init__("verdict")
        self.payload = payload


# ---------------------------------------------------------------------------
# input helpers


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _parse(kind, build, data):
    try:
        return build(data)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed {kind}: {exc!r}")


def load_presentation(path) -> Presentation:
    data = _load(path)
    if isinstance(data, dict) and "presentation" in data:
        data = data["presentation"]
    return _parse("presentation", Presentation.from_dict, data)


def load_type(path) -> TropicalType:
    data = _load(path)
    if isinstance(data, dict) and "type" in data:
        data = data["type"]
    tau = _parse("tropical type", TropicalType.from_dict, data)
    violations = validate(tau)
    if violations:
        raise InvalidType(violations)
    return tau


def monoid_summary(M: ToricMonoid) -> dict:
    return {"rank": M.rank, "hilbert": [list(h) for h in M.hilbert],
            "hilbert_size": len(M.hilbert)}


def report_dict(rep: C.ConstructionReport) -> dict:
    return {"type": rep.type.to_dict(),
            "slopes": rep.slope_table(),
            "witness": rep.witness.to_dict(),
            "presentation_echo": rep.presentation_echo.to_dict(),
            "monoid": monoid_summary(rep.monoid)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_torify(a):
    return monoid_summary(torify(load_presentation(a.input)))


def cmd_sanitize(a):
    P, B = sanitize(load_presentation(a.input), uniform=a.uniform)
    return {"presentation": P.to_dict(), "bipartition": B.to_dict()}


def cmd_construct(a):
    data = _load(a.input)
    pres = data.get("presentation", data) if isinstance(data, dict) else data
    P = _parse("presentation", Presentation.from_dict, pres)
    B = None
    if isinstance(data, dict) and "bipartition" in data:
        B = _parse("bipartition", Bipartition.from_dict, data["bipartition"])
    if a.sanitize:
        P, B = sanitize(P)
    elif B is None:
        B = find_bipartition(P)
        if B is None:
            raise Verdict({"error": "NotBipartite",
                           "message": "some generator occurs on both sides; rerun with --sanitize"})
    rep = C.construct_type(P, B)
    out = report_dict(rep)
    if a.pretty:
        out["trace"] = rep.trace()
    return out


def cmd_type_monoid(a):
    return monoid_summary(tropical_monoid(load_type(a.input)))


def cmd_representable(a):
    w = is_representable(load_type(a.input))
    if w is None:
        raise Verdict({"representable": False})
    return {"representable": True, "witness": w.to_dict()}


def cmd_monogenize(a):
    return R.monogenize(load_type(a.input)).to_dict()


def cmd_reduce(a):
    tau, k = R.expansive_reduce(load_type(a.input))
    return {"type": tau.to_dict(), "zero_edge_count": k}


def cmd_rank_check(a):
    tau = load_type(a.input)
    rank, nv = R.check_rank_formula(tau)
    out = {"rank": rank, "vertex_count": nv, "holds": rank == nv - 1}
    if rank != nv - 1:
        raise Verdict(out)
    return out


def cmd_unparalleled(a):
    tau = load_type(a.input)
    M = R.unparalleled_monoid(tau)
    count = minimal_generator_count(M)
    bound = len(tau.vertices) * (len(tau.vertices) - 1) // 2
    return {"image": M.to_dict(), "minimal_generator_count": count, "bound": bound,
            "saturation": monoid_summary(saturate(M))}


def cmd_realize2d(a):
    v3 = None
    if a.v3:
        try:
            v3 = tuple(int(x) for x in a.v3.split(","))
        except ValueError:
            raise InputError(f"--v3 expects two integers like 1,1, got {a.v3!r}")
        if len(v3) != 2:
            raise InputError("--v3 expects two integers")
    rep = C.realize_rank2(a.k, a.m, v3)
    out = report_dict(rep)
    out["slope_triple"] = [e.slope[0] for e in rep.type.edges]
    return out


def _polygon(data):
    pts = data["vertices"] if isinstance(data, dict) else data
    out = []
    for p in pts:
        if not isinstance(p, (list, tuple)) or not all(isinstance(x, int) for x in p):
            raise NotLattice(f"{p!r} is not a point of Z^2")
        out.append(tuple(p))
    return out


def cmd_obstruct(a):
    cert = R.kgon_obstruction(_parse("polygon", _polygon, _load(a.input)))
    out = cert.to_dict()
    if cert.verdict == R.INACCESSIBLE:
        raise Verdict(out)
    return out


def cmd_glue_affine(a):
    data = _load(a.input)
    if isinstance(data, dict) and ("type" in data or "vertices" in data):
        rep = load_type(a.input)
    else:
        P = _parse("presentation", Presentation.from_dict, data.get("presentation", data))
        B = (_parse("bipartition", Bipartition.from_dict, data["bipartition"])
             if "bipartition" in data else None)
        if B is None:
            P, B = sanitize(P)
        rep = C.construct_type(P, B)
    glued = C.affine_glue(rep)
    return {"type": glued.to_dict(), "graph_genus": glued.graph_genus(),
            "monoid": monoid_summary(tropical_monoid(glued))}


def cmd_search(a):
    out = a.out or os.environ.get("TROPMON_CATALOG")
    run = R.search_types(a.vertices, a.slope_bound, a.multiplicity, out=out, jobs=a.jobs)
    summary = dict(run["summary"])
    if out:
        summary["catalog"] = out
    if a.records:
        summary["records"] = run["records"]
    return summary


# ---------------------------------------------------------------------------
# reproduction of the worked examples


def _repro_main():
    P = Presentation(("e0", "e1", "e2", "e3"), (
        ({"e0": 1, "e2": 1}, {"e1": 2}),
        ({"e1": 1, "e3": 1}, {"e2": 2}),
        ({"e0": 1, "e3": 1}, {"e1": 1, "e2": 1})))
    M = torify(P)
    S, B = sanitize(P, copy_names={"e1": "f1", "e2": "f2"})
    rep = C.construct_type(S, B)
    return {"torify": monoid_summary(M),
            "sanitized": S.to_dict(), "bipartition": B.to_dict(),
            "slopes": rep.slope_table(),
            "representable": rep.witness is not None,
            "vertex_count": len(rep.type.vertices),
            "monoid_matches_input": toric_equal(rep.monoid, M)}


def _repro_2dcone():
    rep = C.realize_rank2(1, 3)
    return {"slope_triple": [e.slope[0] for e in rep.type.edges],
            "monoid": monoid_summary(rep.monoid),
            "monogenic_relation": str(rep.presentation_echo.relations[0])}


def _repro_sweep():
    out = {}
    for nv in (1, 2, 3):
        types = violations = 0
        for tau in R.enumerate_types(nv, 3, 2):
            types += 1
            if R.rank_sweep_check(tau, R.position_witness(tau)) is not None:
                violations += 1
        out[str(nv)] = {"types": types, "violations": violations}
    return {"bounds": {"slope_bound": 3, "multiplicity_bound": 2}, "by_vertex_count": out}


HEPTAGON = [(0, 0), (1, 0), (2, 1), (2, 2), (1, 3), (0, 3), (-1, 1)]
HEXAGON = [(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]
SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def _repro_sevengon():
    return {name: R.kgon_obstruction(poly).to_dict()
            for name, poly in (("heptagon", HEPTAGON), ("hexagon", HEXAGON), ("square", SQUARE))}


REPRO = {
    "example-main-construction": _repro_main,
    "example-2dcone": _repro_2dcone,
    "rank-formula-sweep": _repro_sweep,
    "seven-gon": _repro_sevengon,
}


def golden_path(name) -> Path:
    return Path(str(resources.files("tropmon") / "golden" / f"{name}.json"))


def cmd_repro(a):
    got = json.loads(json.dumps(REPRO[a.id]()))
    path = golden_path(a.id)
    if a.update:
        path.write_text(json.dumps(got, indent=2) + "\n")
        return {"id": a.id, "updated": str(path)}
    want = json.loads(path.read_text())
    diff = _diff(want, got)
    out = {"id": a.id, "matches_golden": not diff, "report": got}
    if diff:
        out["diff"] = diff
        raise Verdict(out)
    return out


def _diff(want, got, where="$"):
    if isinstance(want, dict) and isinstance(got, dict):
        out = []
        for k in sorted(set(want) | set(got)):
            if k not in got:
                out.append(f"{where}.{k}: missing")
            elif k not in want:
                out.append(f"{where}.{k}: unexpected")
            else:
                out += _diff(want[k], got[k], f"{where}.{k}")
        return out
    if want != got:
        return [f"{where}: expected {json.dumps(want)}, got {json.dumps(got)}"]
    return []


# ---------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropmon", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, with_input=True):
        s = sub.add_parser(name, help=help)
        if with_input:
            s.add_argument("input", help="JSON file, or - for stdin")
        s.set_defaults(fn=fn)
        return s

    add("torify", cmd_torify, "toric monoid of a presentation")
    s = add("sanitize", cmd_sanitize, "bipartite positive presentation with the same torification")
    s.add_argument("--uniform", action="store_true", help="double every generator")
    s = add("construct", cmd_construct, "representable type realising a presentation")
    s.add_argument("--sanitize", action="store_true", help="sanitize the presentation first")
    add("type-monoid", cmd_type_monoid, "tropical monoid of a type")
    add("representable", cmd_representable, "representability witness of a type")
    add("monogenize", cmd_monogenize, "monogenic type with the same monoid")
    add("reduce", cmd_reduce, "contract zero-slope edges")
    add("rank-check", cmd_rank_check, "check rank = |V| - 1")
    add("unparalleled", cmd_unparalleled, "unparalleled monoid and its generator bound")
    s = add("realize2d", cmd_realize2d, "triangle type for cone((1,0),(k,m))", with_input=False)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--v3", help="override the auxiliary vector, e.g. 1,1")
    add("obstruct", cmd_obstruct, "polygon inaccessibility certificate")
    add("glue-affine", cmd_glue_affine, "genus-1 type to affine space")
    s = add("search", cmd_search, "enumerate types to R_+ and catalog their monoids", with_input=False)
    s.add_argument("--vertices", type=int, required=True)
    s.add_argument("--slope-bound", type=int, required=True)
    s.add_argument("--multiplicity", type=int, default=1)
    s.add_argument("--out", help="catalog path (default: $TROPMON_CATALOG)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--records", action="store_true", help="include catalog records in the output")
    s = add("repro", cmd_repro, "rerun a worked example against its golden output", with_input=False)
    s.add_argument("id", choices=sorted(REPRO))
    s.add_argument("--update", action="store_true", help=argparse.SUPPRESS)
    return p


def _pretty(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}:")
                lines += [f"{pad}  {line}" for line in v.splitlines()]
            elif isinstance(v, dict) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
        return "\n".join(lines)
    return pad + json.dumps(obj)


def _emit(obj, pretty, stream):
    stream.write((_pretty(obj) if pretty else json.dumps(obj, indent=2)) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        out = a.fn(a)
    except Verdict as v:
        _emit(v.payload, a.pretty, stdout)
        return 1
    except InputError as exc:
        _emit({"error": "InputError", "message": str(exc)}, a.pretty, stderr)
        return 2
    except INPUT_ERRORS as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, InvalidType):
            payload["violations"] = [v.__dict__ for v in exc.violations]
        _emit(payload, a.pretty, stderr)
        return 2
    except TropmonError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("relation", "generators", "failures"):
            if getattr(exc, attr, None) not in (None, ()):
                val = getattr(exc, attr)
                payload[attr] = list(val) if isinstance(val, tuple) else val
        _emit(payload, a.pretty, stdout)
        return 1
    _emit(out, a.pretty, stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
