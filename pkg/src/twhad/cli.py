"""Command-line entry point: ``twhad <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import harness
from .circle import ChordDiagram, Gf2Matrix, apply_perturbation, crossing_graph, perturbation_model_from_matrix, perturbed_separator_or_clique
from .decomposition import Separation, TreeDecomposition, td_validate, treewidth_decomposition, validate_separation
from .dichotomy import DichotomyInput, grid_dichotomy
from .errors import InvalidArgument, ParseError, ResourceLimit, TwHadError, ValidationError
from .graph import Graph, complete_graph, make_grid
from .minors import InducedMinorModel, MinorModel, hadwiger_model, validate_model
from .ordered import OrderedGraph, xfree_separator_or_clique
from .vertexminors import MarkedDrawing, apply_vm_sequence, eliminate_crossings_vm, steps_from_text, steps_to_text

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write(args, name: str, text: str) -> Optional[Path]:
    if not args.out:
        return None
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    p = d / name
    p.write_text(text)
    return p


def _pattern_from(spec: str) -> Graph:
    """``clique:T``, ``grid:K`` or a graph file path."""
    kind, _, val = spec.partition(":")
    if kind == "clique" and val.isdigit():
        return complete_graph(int(val))
    if kind == "grid" and val.isdigit():
        return make_grid(int(val), int(val))[0]
    return Graph.from_text(_read(spec))


# ---------------------------------------------------------------------------
# validation, shared by the subcommand and by certificate writers


def check_certificate(kind: str, graph_text: str, cert_text: str, pattern: Optional[Graph] = None, induced: bool = False) -> dict:
    g = Graph.from_text(graph_text)
    if kind == "td":
        td, n = TreeDecomposition.from_text(cert_text)
        if n != g.n:
            raise ValidationError("vertex-count", f"decomposition declares n={n}, graph has {g.n}")
        return {"valid": True, "width": td_validate(g, td)}
    if kind == "model":
        if pattern is None:
            raise InvalidArgument("model validation needs a pattern")
        cls = InducedMinorModel if induced else MinorModel
        ok, err = validate_model(g, cls.from_text(cert_text, pattern))
        if not ok:
            raise err
        return {"valid": True, "pattern_n": pattern.n, "induced": induced}
    if kind == "separation":
        sep = Separation.from_text(cert_text)
        validate_separation(g, sep)
        return {"valid": True, "order": sep.order}
    raise InvalidArgument(f"unknown certificate kind {kind!r}")


def _revalidate(args, kind: str, graph: Graph, cert: str, **kw) -> None:
    """Write the certificate (if ``--out``) and validate it from its text form."""
    gpath = _write(args, "graph.txt", graph.to_text())
    cpath = _write(args, f"{kind}.txt", cert)
    gtext = gpath.read_text() if gpath else graph.to_text()
    ctext = cpath.read_text() if cpath else cert
    check_certificate(kind, gtext, ctext, **kw)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    text = harness.generate(args.kind, args.params, args.seed)
    if args.out:
        _write(args, f"{args.kind}.txt", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_tw(args) -> int:
    g = Graph.from_text(_read(args.graph))
    w, td = treewidth_decomposition(g, args.max_n)
    _revalidate(args, "td", g, td.to_text(g.n))
    _emit(args, {"treewidth": w, "n": g.n}, f"treewidth {w}")
    return EXIT_OK


def cmd_had(args) -> int:
    g = Graph.from_text(_read(args.graph))
    t, model = hadwiger_model(g, args.max_n)
    _write(args, "pattern.txt", model.pattern.to_text())
    _revalidate(args, "model", g, model.to_text(), pattern=model.pattern)
    _emit(args, {"hadwiger": t, "n": g.n}, f"hadwiger {t}")
    return EXIT_OK


def cmd_dichotomy(args) -> int:
    g = Graph.from_text(_read(args.graph))
    res = grid_dichotomy(DichotomyInput(g, args.k, args.t))
    _write(args, "pattern.txt", res.model.pattern.to_text())
    _revalidate(args, "model", g, res.model.to_text(), pattern=res.model.pattern, induced=res.model.induced)
    payload = {"kind": res.kind, "block": res.block, "pattern_n": res.model.pattern.n}
    _emit(args, payload, f"{res.kind} certificate" + (f" in block {res.block}" if res.block else ""))
    return EXIT_OK


def _parse_x(raw: Optional[str]) -> Optional[list[int]]:
    if raw is None:
        return None
    try:
        return [int(v) for v in raw.split(",") if v]
    except ValueError:
        raise ParseError("--x must be a comma-separated list of vertices") from None


def cmd_separator(args) -> int:
    X = _parse_x(args.x)
    if args.mode == "xfree":
        og = OrderedGraph.from_text(_read(args.instance))
        g = og.graph
        X = X if X is not None else list(og.order[: 12 * args.t])
        res = xfree_separator_or_clique(og, X, args.t)
    else:
        if not args.matrix:
            raise InvalidArgument("--mode perturbed needs --matrix")
        cd = ChordDiagram.from_text(_read(args.instance))
        m = perturbation_model_from_matrix(Gf2Matrix.from_text(_read(args.matrix)))
        g = apply_perturbation(crossing_graph(cd), m)
        need = 4 * m.k * m.k * (4 * m.k + 9) * args.t
        X = X if X is not None else list(range(min(need, cd.n)))
        res = perturbed_separator_or_clique(cd, m, X, args.t)
    if res.kind == "separation":
        _revalidate(args, "separation", g, res.separation.to_text())
        payload = {"kind": "separation", "order": res.separation.order, "route": res.route}
        text = f"separation of order {res.separation.order} ({res.route})"
    else:
        _write(args, "pattern.txt", res.model.pattern.to_text())
        _revalidate(args, "model", g, res.model.to_text(), pattern=res.model.pattern)
        payload = {"kind": "clique", "size": res.model.pattern.n, "route": res.route}
        text = f"K_{res.model.pattern.n} minor ({res.route})"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_vm(args) -> int:
    if args.drawing:
        d = MarkedDrawing.from_text(_read(args.graph))
        # the steps are checked against the smoothed graph before returning
        gadget, steps, target, _ = eliminate_crossings_vm(d)
        _write(args, "gadget.txt", gadget.to_text())
        _write(args, "steps.txt", steps_to_text(steps))
        _write(args, "target.txt", target.to_text())
        payload = {"steps": len(steps), "gadget_n": gadget.n, "target_n": target.n}
        _emit(args, payload, steps_to_text(steps) or "no steps")
        return EXIT_OK
    if not args.steps:
        raise InvalidArgument("vm needs --steps or --drawing")
    g = Graph.from_text(_read(args.graph))
    result, labels = apply_vm_sequence(g, steps_from_text(_read(args.steps)))
    _write(args, "result.txt", result.to_text())
    _emit(args, {"n": result.n, "m": result.m, "labels": labels}, result.to_text())
    return EXIT_OK


def cmd_perturb(args) -> int:
    text = _read(args.instance)
    g0 = crossing_graph(ChordDiagram.from_text(text)) if args.chords else Graph.from_text(text)
    m = perturbation_model_from_matrix(Gf2Matrix.from_text(_read(args.matrix)))
    g = apply_perturbation(g0, m)
    _write(args, "perturbed.txt", g.to_text())
    _emit(args, {"k": m.k, "n": g.n, "m": g.m}, g.to_text())
    return EXIT_OK


def cmd_verify_bound(args) -> int:
    rep = harness.verify_bound(args.family, args.trials, args.seed, args.max_n)
    _write(args, "report.jsonl", rep.to_jsonl(timing=not args.no_timing))
    _write(args, "summary.csv", rep.to_csv())
    _emit(args, rep.summary(), rep.to_csv())
    return EXIT_OK if not rep.failures else EXIT_FAIL


def cmd_validate(args) -> int:
    pattern = _pattern_from(args.pattern) if args.pattern else None
    try:
        info = check_certificate(args.kind, _read(args.graph), _read(args.certificate), pattern, args.induced)
    except ValidationError as exc:
        _emit(args, {"valid": False, "kind": exc.kind, "message": str(exc)}, f"invalid: {exc}")
        return EXIT_FAIL
    _emit(args, info, "valid")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--max-n", type=int, default=None, help="instance size or oracle cap")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", default=None, help="directory for certificate and report files")

    p = argparse.ArgumentParser(prog="twhad", description="Treewidth versus Hadwiger number toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate an instance")
    s.add_argument("kind")
    s.add_argument("params", nargs="*")
    s.set_defaults(func=cmd_gen)

    for name, func in (("tw", cmd_tw), ("had", cmd_had)):
        s = sub.add_parser(name, parents=[common], help=f"exact {'treewidth' if name == 'tw' else 'Hadwiger number'}")
        s.add_argument("graph")
        s.set_defaults(func=func)

    s = sub.add_parser("dichotomy", parents=[common], help="induced grid or clique minor")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(func=cmd_dichotomy)

    s = sub.add_parser("separator", parents=[common], help="balanced separation or clique minor")
    s.add_argument("instance", help="ordered graph (xfree) or chord diagram (perturbed)")
    s.add_argument("--mode", choices=("xfree", "perturbed"), default="xfree")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--x", default=None, help="comma-separated vertex set X")
    s.add_argument("--matrix", default=None)
    s.set_defaults(func=cmd_separator)

    s = sub.add_parser("vm", parents=[common], help="replay or construct vertex-minor sequences")
    s.add_argument("graph", help="graph file, or marked drawing with --drawing")
    s.add_argument("--steps", default=None)
    s.add_argument("--drawing", action="store_true")
    s.set_defaults(func=cmd_vm)

    s = sub.add_parser("perturb", parents=[common], help="apply a GF(2) perturbation")
    s.add_argument("instance")
    s.add_argument("matrix")
    s.add_argument("--chords", action="store_true", help="instance is a chord diagram")
    s.set_defaults(func=cmd_perturb)

    s = sub.add_parser("verify-bound", parents=[common], help="check a treewidth bound on random instances")
    s.add_argument("family", choices=harness.FAMILIES)
    s.add_argument("--no-timing", action="store_true", help="omit timing fields from the report")
    s.set_defaults(func=cmd_verify_bound)

    s = sub.add_parser("validate", parents=[common], help="validate a certificate file")
    s.add_argument("kind", choices=("td", "model", "separation"))
    s.add_argument("graph")
    s.add_argument("certificate")
    s.add_argument("--pattern", default=None, help="clique:T, grid:K or a graph file")
    s.add_argument("--induced", action="store_true")
    s.set_defaults(func=cmd_validate)
    return p


def _classify(exc: TwHadError) -> tuple[int, str]:
    if isinstance(exc, ResourceLimit):
        return EXIT_CAP, "resource-limit"
    if isinstance(exc, ParseError):
        return EXIT_INPUT, "parse-error"
    if isinstance(exc, InvalidArgument):
        return EXIT_INPUT, "invalid-argument"
    if isinstance(exc, ValidationError):
        return EXIT_INPUT, exc.kind
    return EXIT_FAIL, type(exc).__name__


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_n is None:
        args.max_n = 12 if args.command == "verify-bound" else 20
    try:
        return args.func(args)
    except TwHadError as exc:
        code, kind = _classify(exc)
        message = str(exc)
    err = {"error": kind, "message": message}
    if args.json:
        print(json.dumps(err, sort_keys=True))
    else:
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
