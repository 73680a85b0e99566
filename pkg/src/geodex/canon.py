"""Canonical forms of digraphs by partition refinement and backtracking.

The search tree individualises a vertex of the first non-singleton cell and
refines; every leaf is a vertex ordering and the canonical form is the
smallest adjacency encoding over all leaves. A subtree is abandoned once one
of its leaves matches the first leaf of an earlier sibling, since an
automorphism then maps that sibling's subtree onto it.
"""

from __future__ import annotations

from .digraph import Digraph

Partition = list[list[int]]


def _refine(g: Digraph, cells: Partition) -> Partition:
    cells = [list(c) for c in cells]
    while True:
        cell_of = [0] * g.n
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        new: Partition = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            sig = {}
            for v in cell:
                outs = sorted(cell_of[w] for w in g.out_adj[v])
                ins = sorted(cell_of[w] for w in g.in_adj[v])
                sig[v] = (tuple(outs), tuple(ins))
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                new.append(sorted(groups[key]))
        cells = new
        if not changed:
            return cells


def _code(g: Digraph, order: list[int]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    return tuple(tuple(sorted(pos[w] for w in g.out_adj[v])) for v in order)


class _Abandon(Exception):
    def __init__(self, depth: int):
        self.depth = depth


def canonical_ordering(g: Digraph) -> list[int]:
    """A vertex ordering whose adjacency code is canonical for the iso class."""
    best: list = [None, None]  # code, ordering

    def visit(cells: Partition, depth: int, watch: list[tuple[int, tuple]]) -> tuple:
        # returns the code of the first leaf reached in this subtree
        if all(len(c) == 1 for c in cells):
            order = [c[0] for c in cells]
            code = _code(g, order)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            for wdepth, wcode in watch:
                if code == wcode:
                    raise _Abandon(wdepth)
            return code
        target = next(i for i, c in enumerate(cells) if len(c) > 1)
        first_code = None
        for v in cells[target]:
            rest = [w for w in cells[target] if w != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            child = _refine(g, child)
            sub_watch = watch if first_code is None else watch + [(depth, first_code)]
            try:
                code = visit(child, depth + 1, sub_watch)
            except _Abandon as stop:
                if stop.depth != depth:
                    raise
                continue
            if first_code is None:
                first_code = code
        return first_code

    initial = _refine(g, [list(range(g.n))])
    visit(initial, 0, [])
    return best[1]


def canonical_form(g: Digraph) -> bytes:
    """Bytes equal for two digraphs exactly when they are isomorphic."""
    code = _code(g, canonical_ordering(g))
    width = 1 if g.n < 256 else 2
    out = bytearray(g.n.to_bytes(4, "little"))
    for nbrs in code:
        out += len(nbrs).to_bytes(width, "little")
        for w in nbrs:
            out += w.to_bytes(width, "little")
    return bytes(out)


def canonical_digraph(g: Digraph) -> Digraph:
    order = canonical_ordering(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return g.relabel(perm)
