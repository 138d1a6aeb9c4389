"""Command line front end.

Exit codes: 0 ok, 1 negative verdict, 2 parse error, 3 invalid group spec,
4 invalid sequence, 5 expectation mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import autgroup, equivalence, genus, index
from .constructions import RigidAllocator, build_group, parse_group_spec
from .errors import (AntoineError, DomainError, HypothesisError, ParseError, SerializationError, ShapeError,
                     TruncationError)
from .export import to_dot
from .model import (BIINFINITE, CYCLE, PATH, ChainNode, DefiningSequence, canonical_serialize, deserialize, iter_leaves,
                    iter_nodes, validate)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_SPEC = 3
EXIT_INVALID = 4
EXIT_MISMATCH = 5


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str) -> DefiningSequence:
    try:
        data = Path(path).read_bytes() if path != "-" else sys.stdin.buffer.read()
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    try:
        seq = deserialize(data)
    except SerializationError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from exc
    report = validate(seq)
    if not report.ok:
        raise _Exit(EXIT_INVALID, f"{path}: invalid defining sequence\n{report}")
    return seq


def _parse_spec(text: str):
    try:
        return parse_group_spec(text)
    except ParseError as exc:
        pointer = " " * exc.position + "^"
        raise _Exit(EXIT_PARSE, f"cannot parse group spec: {exc}\n  {text}\n  {pointer}") from exc
    except DomainError as exc:
        raise _Exit(EXIT_SPEC, f"invalid group spec: {exc}") from exc


# ---------------------------------------------------------------------------
# analysis


def _pattern(seq: DefiningSequence) -> str:
    kinds = [n.shape.kind for _, n in iter_nodes(seq.root) if n.shape.kind != PATH]
    if len(kinds) == 1 and kinds[0] == CYCLE:
        return "cyclic necklace of rigid pieces"
    if len(kinds) == 1 and kinds[0] == BIINFINITE:
        return "pinched bi-infinite chain of rigid pieces"
    return "linked chain of rigid components"


def _cycle_stages(node) -> int:
    """Number of consecutive stages, starting at ``node``, made only of cycles."""
    levels, frontier = 0, [node]
    while frontier and all(n.shape.kind == CYCLE for n in frontier):
        levels += 1
        frontier = [c for n in frontier for c in n.slots if isinstance(c, ChainNode)]
    return levels


def _index_facts(seq: DefiningSequence) -> dict:
    stages, towers = [], []

    def walk(node: ChainNode, path: tuple, under_cycle: bool):
        where = ".".join(map(str, path)) or "root"
        try:
            value = index.antoine_stage_index(node)
        except ShapeError:
            value = None
        stages.append({"chain": where, "shape": str(node.shape), "index": value})
        if value is not None and not under_cycle:
            levels = _cycle_stages(node)
            towers.append({"chain": where, "stages": levels,
                           "composed_index": index.composed_stage_index(node, levels)})
        for i, c in enumerate(node.slots):
            if isinstance(c, ChainNode):
                walk(c, path + (i,), value is not None)

    for root in seq.roots:
        walk(root, (), False)
    return {"stages": stages, "towers": towers}


def analyze(seq: DefiningSequence) -> dict:
    """Full analysis report as a JSON-ready dict."""
    kinds: dict[str, int] = {}
    for root in seq.roots:
        for _, node in iter_nodes(root):
            kinds[node.shape.kind] = kinds.get(node.shape.kind, 0) + 1
    summary = {
        "root": str(seq.root.shape),
        "roots": len(seq.roots),
        "chains": kinds,
        "rigid_classes": len(seq.universe),
        "rigid_slots": sum(1 for r in seq.roots for _ in iter_leaves(r)),
        "approximate": seq.approximate,
    }
    report: dict = {"summary": summary}
    try:
        group = autgroup.homogeneity_group(seq)
        report["group"] = group.to_json()
        report["group"]["pattern"] = _pattern(seq)
        report["group"]["text"] = str(group)
    except HypothesisError as exc:
        report["group"] = {"not_applicable": str(exc)}
    try:
        report["genus"] = genus.genus_spectrum(seq).to_json()
    except TruncationError as exc:
        report["genus"] = {"not_applicable": str(exc)}
    ok, cert = equivalence.is_unsplittable(seq)
    report["unsplittable"] = cert.to_json()
    report["index"] = _index_facts(seq)
    return report


def render_text(report: dict) -> str:
    s = report["summary"]
    chains = ", ".join(f"{v} {k}" for k, v in sorted(s["chains"].items()))
    out = [f"sequence: {s['root']} root; chains: {chains}; "
           f"{s['rigid_classes']} rigid classes on {s['rigid_slots']} stored slots"]
    g = report["group"]
    if "not_applicable" in g:
        out.append(f"group: not applicable ({g['not_applicable']})")
    else:
        gens = ", ".join(x["name"] for x in g["generators"]) or "none"
        out.append(f"group: {g['text']}  [{g['description']}; generators: {gens}; {g['pattern']}]")
    gr = report["genus"]
    if "not_applicable" in gr:
        out.append(f"genus: not applicable ({gr['not_applicable']})")
    else:
        parts = [f"{gr['counts'][k]} point(s) of genus {k}: {', '.join(v)}" for k, v in gr["exceptional"].items()]
        parts.append(f"all {'other ' if parts else ''}points genus {gr['generic']}")
        out.append("genus: " + "; ".join(parts))
    u = report["unsplittable"]
    if u["unsplittable"]:
        extra = f", {len(u.get('closures', []))} closing argument(s)" if u.get("closures") else ""
        out.append(f"unsplittable: yes ({len(u['chains'])} connected chain(s){extra})")
    else:
        out.append(f"unsplittable: no (separated: {u.get('bipartition')})")
    for t in report["index"]["towers"]:
        out.append(f"index: chain {t['chain']} has index 2 per stage; {t['stages']} stage(s) compose to {t['composed_index']}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    spec = _parse_spec(args.spec)
    alloc = RigidAllocator(args.seed)
    seq = build_group(spec, alloc)
    data = canonical_serialize(seq)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data + b"\n")
    else:
        Path(args.output).write_bytes(data)
    print(f"built {spec}: {seq.root.shape} root, allocator seed {alloc.seed}", file=sys.stderr)
    for rc in alloc.log:
        print(f"  allocated {rc.id} ({rc.display_name})", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    seq = _load(args.path)
    expected = _parse_spec(args.expect) if args.expect else None
    report = analyze(seq)
    code = EXIT_OK
    if expected is not None:
        want = autgroup.canonical_invariants(expected.rank, expected.torsion)
        got = report["group"]
        match = "not_applicable" not in got and got["rank"] == want.rank and got["factors"] == list(want.invariant_factors)
        report["expectation"] = {"expected": str(want), "matches": match}
        if not match:
            code = EXIT_MISMATCH
    if args.json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        text = render_text(report)
        if expected is not None:
            e = report["expectation"]
            text += f"expectation {e['expected']}: {'met' if e['matches'] else 'NOT met'}\n"
        sys.stdout.write(text)
    return code


def cmd_check_equiv(args) -> int:
    a, b = _load(args.a), _load(args.b)
    try:
        result = equivalence.sher_equivalent(a, b)
    except TruncationError as exc:
        raise _Exit(EXIT_INVALID, f"cannot compare: {exc}") from exc
    print(json.dumps(result.to_json(), indent=2, ensure_ascii=False))
    return EXIT_OK if result else EXIT_NEGATIVE


def cmd_export(args) -> int:
    seq = _load(args.path)
    if args.format == "json":
        sys.stdout.buffer.write(canonical_serialize(seq) + b"\n")
    else:
        sys.stdout.write(to_dot(seq, args.depth))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="antoine", description="Rigid Antoine-type Cantor sets with prescribed homogeneity groups.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build the composite chain for a group spec like 'Z^2 x Z/2 x Z/4'")
    b.add_argument("spec")
    b.add_argument("-o", "--output", help="output file (default: stdout)")
    b.add_argument("--seed", type=int, help="rigid class allocator seed (default: random)")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="report group, genus, splitting and index facts")
    a.add_argument("path")
    a.add_argument("--expect", help="expected group spec; exit 5 on mismatch")
    a.add_argument("--json", action="store_true", help="emit JSON instead of text")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check-equiv", help="decide stage-by-stage equivalence of two sequences")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(func=cmd_check_equiv)

    e = sub.add_parser("export", help="export as DOT or canonical JSON")
    e.add_argument("path")
    e.add_argument("--format", choices=("dot", "json"), default="dot")
    e.add_argument("--depth", type=int, default=None, help="deepest stage to draw")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _Exit as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except AntoineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
