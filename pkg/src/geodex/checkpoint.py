"""Binary checkpoint files for the excess-one search.

Layout (all integers little-endian)::

    offset  size  field
    0       4     magic b"GDXC"
    4       2     format version (1)
    6       2     d
    8       2     k
    10      2     prefix depth (vertices assigned before work is split)
    12      1     pruning flags (bit 0 common-out rule, bit 1 transposition rule)
    13      4     index of the next unfinished prefix task
    17      2     length L of the choice stack
    19      4*L   DFS choice indices, one per assigned vertex
    ..      8     nodes explored so far below the split depth
    ..      4     number F of digraphs found so far
    then F records: n (u16), then for each vertex its out-degree (u16)
    followed by its out-neighbours (u16 each).

Choice index i at position v means the i-th admissible out-neighbour set of
vertex v, in the search's fixed enumeration order. The first ``prefix depth``
entries name the task; any further entries are the path inside the task where
the budget ran out. Nodes along that path were counted already except the
last, which is the first child not yet explored. An empty stack with
next task equal to the task count marks a finished search.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path

from .digraph import Digraph
from .errors import CheckpointError

MAGIC = b"GDXC"
VERSION = 1
_HEADER = struct.Struct("<4sHHHHBIH")


@dataclass(frozen=True)
class Checkpoint:
    d: int
    k: int
    prefix_depth: int
    flags: int
    next_task: int
    stack: tuple[int, ...]
    nodes: int
    found: tuple[Digraph, ...]


def encode(cp: Checkpoint) -> bytes:
    out = bytearray(_HEADER.pack(MAGIC, VERSION, cp.d, cp.k, cp.prefix_depth,
                                 cp.flags, cp.next_task, len(cp.stack)))
    out += struct.pack(f"<{len(cp.stack)}I", *cp.stack)
    out += struct.pack("<QI", cp.nodes, len(cp.found))
    for g in cp.found:
        out += struct.pack("<H", g.n)
        for nbrs in g.out_adj:
            out += struct.pack(f"<H{len(nbrs)}H", len(nbrs), *nbrs)
    return bytes(out)


def decode(data: bytes) -> Checkpoint:
    if len(data) < _HEADER.size:
        raise CheckpointError("checkpoint file is empty or truncated")
    magic, version, d, k, depth, flags, next_task, slen = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CheckpointError("not a geodex checkpoint (bad magic)")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    pos = _HEADER.size
    try:
        stack = struct.unpack_from(f"<{slen}I", data, pos)
        pos += 4 * slen
        nodes, count = struct.unpack_from("<QI", data, pos)
        pos += 12
        found = []
        for _ in range(count):
            (n,) = struct.unpack_from("<H", data, pos)
            pos += 2
            adj = []
            for _ in range(n):
                (deg,) = struct.unpack_from("<H", data, pos)
                adj.append(struct.unpack_from(f"<{deg}H", data, pos + 2))
                pos += 2 + 2 * deg
            found.append(Digraph(n, adj))
    except (struct.error, ValueError) as exc:
        raise CheckpointError(f"corrupt checkpoint: {exc}") from exc
    if pos != len(data):
        raise CheckpointError("trailing bytes after checkpoint body")
    return Checkpoint(d, k, depth, flags, next_task, tuple(stack), nodes, tuple(found))


def read_checkpoint(path: str | os.PathLike) -> Checkpoint:
    return decode(Path(path).read_bytes())


def write_checkpoint(path: str | os.PathLike, cp: Checkpoint) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(encode(cp))
    os.replace(tmp, path)
