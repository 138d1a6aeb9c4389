"""Graphviz rendering of the linking structure of a defining sequence."""

from __future__ import annotations

from .model import BIINFINITE, PATH, RAY, ChainNode, DefiningSequence, RigidLeaf, Truncation


def _id(root: int, path: tuple) -> str:
    return "_".join(["t", str(root)] + [str(i) for i in path])


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _is_parallel_stage(node: ChainNode) -> bool:
    # a lone unlinked torus has index 1 in its container: its boundary is parallel, so the stage adds nothing
    return node.shape.kind == PATH and node.shape.n == 1 and isinstance(node.slots[0], ChainNode)


def to_dot(seq: DefiningSequence, depth_limit: int | None = None) -> str:
    """DOT graph: ellipses are tori, solid edges link tori, dashed edges go from a torus to what it contains.

    Tori holding rigid pieces are boxes labeled with the rigid class; pinch
    points are diamonds.  Infinite chains show one period flanked by ellipsis
    markers.  Stage 0 is the root torus; only stages ``<= depth_limit`` are
    drawn.  A stage made of a single unlinked torus is drawn merged with its
    container.
    """
    lines = ["graph antoine {", "  node [shape=ellipse];"]

    def emit(node: ChainNode, root: int, path: tuple, parent: str, stage: int):
        if _is_parallel_stage(node):
            emit(node.slots[0], root, path + (0,), parent, stage)
            return
        if depth_limit is not None and stage > depth_limit:
            return
        ids = [_id(root, path + (i,)) for i in range(len(node.slots))]
        for i, c in enumerate(node.slots):
            name = "T" + ".".join(map(str, path + (i,)))
            if isinstance(c, RigidLeaf):
                lines.append(f"  {ids[i]} [shape=box, label={_quote(c.rigid.name)}];")
            elif isinstance(c, Truncation):
                lines.append(f"  {ids[i]} [style=dotted, label={_quote(name + ' ...')}];")
            else:
                lines.append(f"  {ids[i]} [label={_quote(name)}];")
            lines.append(f"  {parent} -- {ids[i]} [style=dashed];")
        for a, b in node.shape.edges():
            lines.append(f"  {ids[a]} -- {ids[b]};")
        if node.shape.kind in (BIINFINITE, RAY):
            w = _id(root, path) + "_w"
            lines.append(f"  {w} [shape=diamond, label=\"w\"];")
            lines.append(f"  {parent} -- {w} [style=dashed];")
            ends = [(w + "_right", ids[-1])]
            if node.shape.kind == BIINFINITE:
                ends.append((w + "_left", ids[0]))
            for marker, torus in ends:
                lines.append(f"  {marker} [shape=plaintext, label=\"...\"];")
                lines.append(f"  {torus} -- {marker};")
                lines.append(f"  {marker} -- {w} [style=dotted];")
        for i, c in enumerate(node.slots):
            if isinstance(c, ChainNode):
                emit(c, root, path + (i,), ids[i], stage + 1)

    for k, root in enumerate(seq.roots):
        top = _id(k, ()) + "_M"
        lines.append(f"  {top} [label={_quote('M0' if k == 0 else f'M0[{k}]')}];")
        emit(root, k, (), top, 1)
    lines.append("}")
    return "\n".join(lines) + "\n"
