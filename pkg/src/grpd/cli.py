"""``grpd`` command line: JSON in, deterministic JSON reports out.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 internal
inconsistency.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .decide import Verdict, af_cycle, af_lp, af_stiemke, decide
from .drgroupoid import (DimensionGroupElement, diagram_check, diagram_check_vertex,
                         dg_equal, dg_positive, parse_graph_section, window_paths)
from .dynsys import MetricModel, compression_exists, pseudoloop_exists
from .errors import GrpdError, GuardExceededError, InconsistencyError, InvalidInputError
from .exactlin import IntMatrix, format_rational, parse_rational
from .fibered import (FiberedSet, Section, check_section, homology, identity_function,
                      trace_data, trace_phi)
from .graphmodel import DirectedGraph, adjacency_transfer, validate

SCHEMA = "grpd.report/1"

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3


class CommandResult:
    def __init__(self, result: dict, code: int = EXIT_OK):
        self.result = result
        self.code = code


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def render(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def load_json(path: str | Path):
    text = Path(path).read_text()
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def _digest(texts) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
    return "sha256:" + h.hexdigest()


# --------------------------------------------------------------------------
# verdict serialisation and replay


def verdict_json(v: Verdict) -> dict:
    out = {"method": v.method, "embeddable": v.embeddable, "power": v.power}
    if v.witness is not None:
        out["certificate"] = {"f": list(v.witness), "h": list(v.increment)}
    elif v.fixed_vector is not None:
        out["certificate"] = {"y": list(v.fixed_vector)}
    else:
        out["certificate"] = None
    if v.details:
        out["details"] = v.details
    return out


def replay_certificate(matrix, power: int, cert) -> bool:
    """Check one serialised certificate with IntMatrix arithmetic only."""
    A = IntMatrix.from_rows(matrix)
    M = (A ** power) - IntMatrix.identity(A.rows)
    if cert is None:
        return True
    if "f" in cert:
        h = M.apply([int(x) for x in cert["f"]])
        return (h == [int(x) for x in cert["h"]] and all(x >= 0 for x in h) and any(h))
    if "y" in cert:
        y = [parse_rational(str(x)) for x in cert["y"]]
        return all(x > 0 for x in y) and not any(M.T.apply(y))
    return False


def verify_report(report: dict) -> dict:
    result = report.get("result", {})
    matrix = result.get("transfer_matrix")
    if matrix is None:
        raise InvalidInputError("report carries no transfer matrix to replay against")
    checks = []
    for v in result.get("verdicts", []):
        ok = replay_certificate(matrix, v.get("power", 1), v.get("certificate"))
        if "certificate" not in v or (v["certificate"] is None and not v.get("embeddable")):
            ok = False
        checks.append({"method": v.get("method"), "verified": ok})
    return {"checks": checks, "all_verified": all(c["verified"] for c in checks)}


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    data, text = load_json(args.graph)
    g = DirectedGraph.from_json(data)
    rep = validate(g)
    res = {"sinks": list(rep.sinks), "sources": list(rep.sources),
           "row_finite": rep.row_finite, "ok": rep.ok, "diagnostic": rep.describe()}
    return CommandResult(res, EXIT_OK if rep.ok else EXIT_NEGATIVE), [text]


def _decide_result(g: DirectedGraph, method: str, power: int, verify: bool) -> CommandResult:
    A = adjacency_transfer(g)
    if method == "all":
        methods = ("lp", "stiemke", "cycle") if power == 1 else ("lp", "stiemke")
        dec = decide(g, methods, power)
        verdicts, embeddable = list(dec.verdicts), dec.embeddable
    else:
        if method == "cycle":
            if power != 1:
                raise InvalidInputError("the cycle method does not take --power")
            v = af_cycle(g)
        elif method == "lp":
            v = af_lp(A, power)
        else:
            v = af_stiemke(A, power)
        verdicts, embeddable = [v], v.embeddable
    res = {"vertices": list(A.vertices), "transfer_matrix": A.A.to_rows(),
           "embeddable": embeddable, "power": power,
           # one boolean; the analytic properties are equivalent in this setting
           "labels": ["af_embeddable", "quasidiagonal", "stably_finite"],
           "verdicts": [verdict_json(v) for v in verdicts]}
    if verify:
        replay = verify_report({"result": res})
        res["verification"] = replay
        if not replay["all_verified"]:
            raise InconsistencyError("certificate replay failed", replay)
    return CommandResult(res, EXIT_OK if embeddable else EXIT_NEGATIVE)


def cmd_decide(args):
    data, text = load_json(args.graph)
    g = DirectedGraph.from_json(data)
    if args.power < 1:
        raise InvalidInputError("--power must be at least 1")
    return _decide_result(g, args.method, args.power, args.verify), [text]


def cmd_homology(args):
    data, text = load_json(args.fibered)
    fs = FiberedSet.from_json(data)
    p = homology(fs, args.degree)
    res = {"degree": args.degree, "free_rank": p.free_rank, "torsion": list(p.torsion),
           "group": p.describe()}
    if p.cone_generators is not None:
        res["cone_generators"] = {str(x): list(c) for x, c in zip(p.labels, p.cone_generators)}
    return CommandResult(res), [text]


def _load_section(fs: FiberedSet, spec: str, texts: list) -> Section:
    if spec == "auto":
        return Section({y: fs.fiber(y)[0] for y in fs.Y})
    data, text = load_json(spec)
    texts.append(text)
    if not isinstance(data, dict):
        raise InvalidInputError("section file must map Y ids to X ids")
    sec = Section({str(k): str(v) for k, v in data.items()})
    check_section(fs, sec)
    return sec


def _load_projection(spec: str, texts: list):
    """{"k": n, "entries": n x n list of [{"u","v","value"}, ...]}."""
    data, text = load_json(spec)
    texts.append(text)
    try:
        k = int(data["k"])
        entries = data["entries"]
        mat = [[{(str(t["u"]), str(t["v"])): parse_rational(str(t["value"]))
                 for t in entries[i][j]} for j in range(k)] for i in range(k)]
    except (KeyError, TypeError, IndexError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"malformed projection file: {exc}") from None
    return mat[0][0] if k == 1 else mat


def cmd_trace(args):
    data, text = load_json(args.fibered)
    texts = [text]
    fs = FiberedSet.from_json(data)
    phi = _load_section(fs, args.section, texts)
    p = _load_projection(args.projection, texts) if args.projection else identity_function(fs)
    tr = trace_phi(fs, phi, p)
    res = {"section": dict(phi.phi), "trace": dict(zip(fs.X, tr)),
           "fiber_traces": dict(zip(fs.Y, trace_data(fs, p)))}
    return CommandResult(res), texts


def _parse_element(text: str) -> DimensionGroupElement:
    try:
        level, vec = text.split(":", 1)
        return DimensionGroupElement(int(level), [int(x) for x in vec.split(",") if x.strip()])
    except ValueError:
        raise InvalidInputError(f"element {text!r} must look like n:v1,v2,...") from None


def cmd_dimgroup(args):
    data, text = load_json(args.graph)
    g = DirectedGraph.from_json(data)
    # connecting map on vertex-cylinder coordinates: transpose of range-source counts
    C = adjacency_transfer(g).A.T
    elems = [_parse_element(e) for e in args.element or []]
    for e in elems:
        if len(e.v) != C.rows:
            raise InvalidInputError(f"element has {len(e.v)} coordinates for {C.rows} vertices")
    if args.op == "equal":
        if len(elems) != 2:
            raise InvalidInputError("--op equal needs two --element arguments")
        eq_ = dg_equal(elems[0], elems[1], C)
        return CommandResult({"op": "equal", "equal": eq_},
                             EXIT_OK if eq_ else EXIT_NEGATIVE), [text]
    if len(elems) != 1:
        raise InvalidInputError("--op positive needs one --element argument")
    pos = dg_positive(elems[0], C, args.depth)
    res = {"op": "positive", "status": pos.status, "verdict": str(pos)}
    if pos.k is not None:
        res["k"] = pos.k
    return CommandResult(res, EXIT_NEGATIVE if pos.status == "not_positive" else EXIT_OK), [text]


def cmd_diagram(args):
    data, text = load_json(args.graph)
    g = DirectedGraph.from_json(data)
    texts = [text]
    spec = args.section
    if spec != "auto" and Path(spec).is_file():
        sdata, stext = load_json(spec)
        texts.append(stext)
        spec = ",".join(f"{k}={v}" for k, v in sdata.items())
    phi = parse_graph_section(g, spec)
    L = args.window
    if L < 2:
        raise InvalidInputError("--window must be at least 2")
    checked = failed = 0
    for ell in range(2, L + 1):
        for p in window_paths(g, ell).paths:
            checked += 1
            if not diagram_check(g, phi, {p: 1}, L):
                failed += 1
    n = len(g.vertices)
    for i in range(n):
        u = [int(i == j) for j in range(n)]
        checked += 1
        if not diagram_check_vertex(g, phi, u, L, L):
            failed += 1
    res = {"window": L, "section": dict(phi.preferred), "checked": checked,
           "failed": failed, "commutes": failed == 0}
    if failed:
        raise InconsistencyError("diagram does not commute", res)
    return CommandResult(res), texts


def cmd_pseudoloop(args):
    data, text = load_json(args.model)
    m = MetricModel.from_json(data)
    try:
        eps = parse_rational(args.eps)
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"--eps {args.eps!r} is not a rational p/q") from None
    r = pseudoloop_exists(m, args.base, eps)
    res = {"base": args.base, "eps": eps, "exists": r.exists,
           "witness": list(r.witness) if r.witness else None, "length_cap": r.cap}
    return CommandResult(res, EXIT_OK if r.exists else EXIT_NEGATIVE), [text]


def cmd_compress(args):
    data, text = load_json(args.model)
    m = MetricModel.from_json(data)
    rep = compression_exists(m.system)
    res = {"compression_exists": rep.exists, "subsets_checked": rep.subsets_checked,
           "cardinality_argument": rep.by_cardinality, "log": list(rep.log),
           "embeddable": not rep.exists}
    return CommandResult(res, EXIT_NEGATIVE if rep.exists else EXIT_OK), [text]


def _batch_one(path: Path) -> dict:
    try:
        data, text = load_json(path)
        g = DirectedGraph.from_json(data)
        r = _decide_result(g, "all", 1, False)
        return {"file": path.name, "embeddable": r.result["embeddable"],
                "input_digest": _digest([text]), "verdicts": r.result["verdicts"]}
    except (GrpdError, OSError) as exc:
        return {"file": path.name, "error": f"{type(exc).__name__}: {exc}"}


def cmd_batch(args):
    root = Path(args.directory)
    if not root.is_dir():
        raise InvalidInputError(f"{root} is not a directory")
    files = sorted(p for p in root.iterdir() if p.suffix == ".json" and p.is_file())
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(_batch_one, files))
    results.sort(key=lambda r: r["file"])
    summary = {"files": len(results),
               "embeddable": sum(1 for r in results if r.get("embeddable") is True),
               "not_embeddable": sum(1 for r in results if r.get("embeddable") is False),
               "errors": sum(1 for r in results if "error" in r)}
    return CommandResult({"summary": summary, "reports": results}), [r.get("input_digest", "")
                                                                     for r in results]


def cmd_verify(args):
    data, text = load_json(args.report)
    res = verify_report(data)
    return CommandResult(res, EXIT_OK if res["all_verified"] else EXIT_INCONSISTENT), [text]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grpd", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"grpd {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="list sinks and sources of a graph")
    s.add_argument("graph")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("decide", help="decide AF embeddability of a graph")
    s.add_argument("graph")
    s.add_argument("--method", choices=["all", "lp", "stiemke", "cycle"], default="all")
    s.add_argument("--power", type=int, default=1)
    s.add_argument("--verify", action="store_true", help="replay every certificate")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("homology", help="H_0 or H_1 of a fibered set")
    s.add_argument("fibered")
    s.add_argument("--degree", type=int, choices=[0, 1], default=0)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("trace", help="trace of a projection through a section")
    s.add_argument("fibered")
    s.add_argument("--section", default="auto")
    s.add_argument("--projection", default=None)
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("dimgroup", help="dimension-group equality or positivity")
    s.add_argument("graph")
    s.add_argument("--element", action="append", help="n:v1,v2,... (repeat for equal)")
    s.add_argument("--op", choices=["equal", "positive"], required=True)
    s.add_argument("--depth", type=int, default=8)
    s.set_defaults(func=cmd_dimgroup)

    s = sub.add_parser("diagram", help="check the similarity diagram on a path window")
    s.add_argument("graph")
    s.add_argument("--window", type=int, required=True)
    s.add_argument("--section", default="auto", help="auto, a JSON file, or v1=e1,v2=e2")
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("pseudoloop", help="search for an eps-pseudoloop")
    s.add_argument("model")
    s.add_argument("--base", required=True)
    s.add_argument("--eps", required=True)
    s.set_defaults(func=cmd_pseudoloop)

    s = sub.add_parser("compress", help="look for a compressed subset of a bijection")
    s.add_argument("model")
    s.set_defaults(func=cmd_compress)

    s = sub.add_parser("batch", help="decide every graph file in a directory")
    s.add_argument("directory")
    s.add_argument("--jobs", type=int, default=4)
    s.set_defaults(func=cmd_batch)

    s = sub.add_parser("verify", help="replay the certificates of a decide report")
    s.add_argument("report")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"schema": SCHEMA, "command": argv, "tool_version": __version__}
    try:
        result, texts = args.func(args)
        report["input_digest"] = _digest(texts)
        report["result"] = result.result
        code = result.code
    except InconsistencyError as exc:
        report["error"] = {"kind": "inconsistency", "message": str(exc), "dump": exc.dump}
        code = EXIT_INCONSISTENT
    except (GrpdError, OSError, ValueError) as exc:
        kind = "guard" if isinstance(exc, GuardExceededError) else "input"
        report["error"] = {"kind": kind, "message": str(exc)}
        code = EXIT_INPUT
    report["exit_code"] = code
    out.write(render(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
