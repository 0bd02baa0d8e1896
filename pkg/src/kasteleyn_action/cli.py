"""Command-line entry point.

Every command reads one graph document (``--input``), except ``fuzz`` which
generates its own.  Reports are either ``key: value`` text or canonical JSON
(``--format structured``); both are deterministic for a given input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .action import ActionTable, Reference, decode
from .algebra import determinant
from .fuzz import MIN_EDGES, random_graphs
from .gplus import (
    GPlusGraph,
    Matching,
    construct_gplus,
    enumerate_matchings,
    induced_kasteleyn_orientation,
    kasteleyn_cokernel,
    kasteleyn_matrix,
)
from .orientations import bernardi_class, bernardi_divisor, enumerate_trees, q_connected_orientation
from .planar import EmbeddedPlanarGraph, GraphError, parse_graph
from .render import render_all
from .verify import GraphData, digest, verify_graph

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def builtin_graphs() -> list[str]:
    files = resources.files("kasteleyn_action") / "graphs"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def read_graph(path: str | None) -> EmbeddedPlanarGraph:
    """A document path, or the name of a bundled example such as ``k3``."""
    if path is None:
        raise InputError("--input is required")
    p = Path(path)
    if p.is_file():
        text = p.read_text()
    elif path in builtin_graphs():
        text = (resources.files("kasteleyn_action") / "graphs" / f"{path}.json").read_text()
    else:
        raise InputError(f"{path}: no such file")
    try:
        return parse_graph(text)
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _index(value: int | None, n: int, what: str) -> int:
    k = 0 if value is None else value
    if not 0 <= k < n:
        raise InputError(f"{what} index {k} out of range 0..{n - 1}")
    return k


# -- formatting ------------------------------------------------------------------

def _text(data: Any, indent: str = "") -> list[str]:
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{indent}{k}:")
                lines.extend(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{indent}-")
                lines.extend(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}- {_scalar(v)}")
    else:
        lines.append(indent + _scalar(data))
    return lines


def _flat(v: Any) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values()) and len(v) <= 4
    return True


def _scalar(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_scalar(x)}" for k, x in v.items()) + "}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def emit(data: Any, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "structured":
        out.write(json.dumps(data, indent=2, sort_keys=False) + "\n")
    else:
        out.write("\n".join(_text(data)) + "\n")


def matching_json(m: Matching, h: GPlusGraph) -> dict[str, str]:
    return {h.white_name(e.white): h.black_name(e.black) for e in (h.edges[k] for k in m.by_white)}


def tree_json(g: EmbeddedPlanarGraph, t) -> list[str]:
    return [g.edges[i].id for i in sorted(t)]


# -- commands --------------------------------------------------------------------

def cmd_canon(args) -> tuple[Any, int]:
    g = read_graph(args.input)
    if args.format == "structured":
        return g.to_document(), EXIT_OK
    sys.stdout.write(g.canonical_text() + "\n")
    return None, EXIT_OK


def cmd_info(args):
    g = read_graph(args.input)
    d = GraphData(g)
    ko = induced_kasteleyn_orientation(d.tree_orientations[0], d.h)
    K = kasteleyn_cokernel(kasteleyn_matrix(ko, d.h, check=False))
    return {
        "graph": g.name,
        "digest": digest(g),
        "V": g.n_vertices,
        "E": g.n_edges,
        "F": len(g.faces),
        "genus": g.genus,
        "root": g.root,
        "trees": len(d.trees),
        "matchings": len(d.matchings),
        "Jac": d.jac.invariant_factors,
        "K": K.invariant_factors,
    }, EXIT_OK


def cmd_gplus(args):
    g = read_graph(args.input)
    h = construct_gplus(g)
    doc = h.to_document()
    if args.format == "structured":
        return doc, EXIT_OK
    return {
        "graph": doc["name"],
        "white": [h.white_name(w) for w in range(h.n_white)],
        "black": [h.black_name(b) for b in range(h.n_black)],
        "edges": [f"{e['id']} {e['u']}-{e['v']} {e['kind']}" for e in doc["edges"]],
        "corners": len(h.corners),
    }, EXIT_OK


def cmd_trees(args):
    g = read_graph(args.input)
    rows = []
    for k, t in enumerate(enumerate_trees(g)):
        o = q_connected_orientation(g, t)
        rows.append({"index": k, "edges": tree_json(g, t), "orientation": o.to_json(g)})
    return {"graph": g.name, "count": len(rows), "trees": rows}, EXIT_OK


def cmd_matchings(args):
    g = read_graph(args.input)
    h = construct_gplus(g)
    ms = enumerate_matchings(h)
    rows = [{"index": k, "edges": matching_json(m, h)} for k, m in enumerate(ms)]
    return {"graph": g.name, "count": len(rows), "matchings": rows}, EXIT_OK


def cmd_jacobian(args):
    g = read_graph(args.input)
    d = GraphData(g)
    return {"graph": g.name, "invariant_factors": d.jac.invariant_factors,
            "order": d.jac.order, "trees": len(d.trees)}, EXIT_OK


def cmd_kasteleyn(args):
    g = read_graph(args.input)
    d = GraphData(g)
    k = _index(args.tree, len(d.trees), "tree")
    ko = induced_kasteleyn_orientation(d.tree_orientations[k], d.h)
    K = kasteleyn_matrix(ko, d.h, check=True)
    cok = kasteleyn_cokernel(K)
    return {
        "graph": g.name,
        "tree": tree_json(g, d.trees[k]),
        "rows": [d.h.black_name(b) for b in range(d.h.n_black)],
        "columns": [d.h.white_name(w) for w in range(d.h.n_white)],
        "matrix": K,
        "determinant": determinant(K),
        "invariant_factors": cok.invariant_factors,
    }, EXIT_OK


def cmd_bernardi(args):
    g = read_graph(args.input)
    d = GraphData(g)
    k = _index(args.tree, len(d.trees), "tree")
    d0 = bernardi_divisor(g, d.tree_orientations[k])
    rows = []
    for t, o in zip(d.trees, d.tree_orientations):
        rows.append({"tree": tree_json(g, t), "divisor": bernardi_divisor(g, o).to_json(),
                     "class": list(bernardi_class(g, o, d0, d.jac).cls.residues)})
    return {"graph": g.name, "reference_tree": tree_json(g, d.trees[k]),
            "moduli": d.jac.invariant_factors, "trees": rows}, EXIT_OK


def cmd_temperley(args):
    g = read_graph(args.input)
    d = GraphData(g)
    rows = [{"tree": tree_json(g, t), "matching": matching_json(m, d.h)}
            for t, m in zip(d.trees, d.temperley_images)]
    return {"graph": g.name, "pairs": rows}, EXIT_OK


def cmd_action(args):
    g = read_graph(args.input)
    d = GraphData(g)
    r = _index(args.reference, len(d.matchings), "reference")
    ref = Reference.from_matching(d.h, d.matchings[r])
    table = ActionTable(ref, d.matchings)
    classes = []
    for j in range(len(d.matchings)):
        classes.append({"matching": j, "class": list(decode(int(table.codes[j]), table.moduli).residues)})
    rows = []
    for k in range(table.order):
        rows.append({"class": list(decode(k, table.moduli).residues),
                     "images": [int(x) for x in table.table[k]]})
    return {"graph": g.name, "reference": r, "moduli": list(table.moduli),
            "matchings": len(d.matchings), "psi": classes, "table": rows}, EXIT_OK


def cmd_verify(args):
    g = read_graph(args.input)
    report = verify_graph(g)
    return report.to_dict(), EXIT_OK if report.passed else EXIT_FAIL


def cmd_render(args):
    if not args.out:
        raise InputError("render needs --out DIR")
    g = read_graph(args.input)
    d = GraphData(g)
    k = _index(args.tree, len(d.trees), "tree")
    t, o = d.trees[k], d.tree_orientations[k]
    ko = induced_kasteleyn_orientation(o, d.h)
    m = d.temperley_images[k] if args.matching is None else \
        d.matchings[_index(args.matching, len(d.matchings), "matching")]
    paths = render_all(g, Path(args.out), tree=t, orientation=o, matching=m, kasteleyn=ko, h=d.h)
    return {"graph": g.name, "files": [str(p) for p in paths]}, EXIT_OK


def cmd_fuzz(args):
    if args.max_edges < MIN_EDGES:
        raise InputError(f"--max-edges must be at least {MIN_EDGES}")
    if args.count < 0:
        raise InputError("--count must be nonnegative")
    out = Path(args.out) if args.out else None
    rows = []
    failed = 0
    for g in random_graphs(args.seed, args.count, args.max_edges):
        report = verify_graph(g)
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{g.name}.json").write_text(g.canonical_text() + "\n")
        bad = [c.id for c in report.checks if not c.passed]
        failed += bool(bad)
        rows.append({"graph": g.name, "E": g.n_edges, "digest": report.digest,
                     "status": "pass" if not bad else "FAIL", "failed_checks": bad})
    summary = {"seed": args.seed, "count": args.count, "max_edges": args.max_edges,
               "tool_version": __version__, "passed": args.count - failed,
               "failed": failed, "graphs": rows}
    return summary, EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS: dict[str, tuple[Callable, str]] = {
    "canon": (cmd_canon, "print the canonical form of a graph document"),
    "info": (cmd_info, "counts and invariant factors"),
    "gplus": (cmd_gplus, "construct G+"),
    "trees": (cmd_trees, "spanning trees and their q-connected orientations"),
    "matchings": (cmd_matchings, "perfect matchings of G+"),
    "jacobian": (cmd_jacobian, "invariant factors of the Jacobian"),
    "kasteleyn": (cmd_kasteleyn, "Kasteleyn matrix and cokernel"),
    "bernardi": (cmd_bernardi, "Bernardi classes of every tree"),
    "temperley": (cmd_temperley, "tree to matching table"),
    "action": (cmd_action, "full group action table"),
    "verify": (cmd_verify, "run every check"),
    "render": (cmd_render, "write DOT and SVG drawings"),
    "fuzz": (cmd_fuzz, "verify random graphs"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kasteleyn-action",
                                     description="Kasteleyn cokernels, Jacobians and the matching action.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="graph document, or a bundled example name")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--count", type=int, default=100)
    common.add_argument("--max-edges", type=int, default=10)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--tree", type=int, help="tree index (default 0)")
    common.add_argument("--matching", type=int, help="matching index for render overlays")
    common.add_argument("--reference", type=int, help="reference matching index (default 0)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        data, status = fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if data is not None:
        emit(data, args.format)
    return status


if __name__ == "__main__":
    sys.exit(main())
