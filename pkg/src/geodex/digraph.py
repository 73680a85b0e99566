"""Directed graphs, walk counting and excess-one verification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .arithmetic import moore_bound
from .errors import DigraphFormatError, NotAutomorphism, NotExcessOne


@dataclass(frozen=True)
class Digraph:
    """Vertices ``0..n-1`` with sorted out-neighbour tuples.

    Self-loops and parallel arcs are rejected at construction.
    """

    n: int
    out_adj: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, out_adj: Iterable[Iterable[int]]):
        adj = tuple(tuple(sorted(nbrs)) for nbrs in out_adj)
        if n < 1:
            raise ValueError("a digraph needs at least one vertex")
        if len(adj) != n:
            raise ValueError(f"expected {n} adjacency lists, got {len(adj)}")
        for u, nbrs in enumerate(adj):
            for v in nbrs:
                if not 0 <= v < n:
                    raise ValueError(f"arc {u}->{v} leaves the vertex range 0..{n - 1}")
                if v == u:
                    raise ValueError(f"self-loop at vertex {u}")
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"parallel arcs out of vertex {u}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "out_adj", adj)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in arcs:
            adj[u].append(v)
        return cls(n, adj)

    @classmethod
    def cycle(cls, n: int) -> Digraph:
        return cls(n, [[(u + 1) % n] for u in range(n)])

    @classmethod
    def complete(cls, n: int) -> Digraph:
        return cls(n, [[v for v in range(n) if v != u] for u in range(n)])

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        ins: list[list[int]] = [[] for _ in range(self.n)]
        for u, nbrs in enumerate(self.out_adj):
            for v in nbrs:
                ins[v].append(u)
        return tuple(tuple(sorted(x)) for x in ins)

    @cached_property
    def arc_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.arcs())

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.out_adj):
            for v in nbrs:
                yield u, v

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set

    @property
    def size(self) -> int:
        return sum(len(nbrs) for nbrs in self.out_adj)

    def out_degree(self, u: int) -> int:
        return len(self.out_adj[u])

    def in_degree(self, u: int) -> int:
        return len(self.in_adj[u])

    def adjacency_matrix(self) -> list[list[int]]:
        rows = [[0] * self.n for _ in range(self.n)]
        for u, v in self.arcs():
            rows[u][v] = 1
        return rows

    def induced(self, vertices: Iterable[int]) -> tuple[Digraph, list[int]]:
        """Induced subdigraph, relabelled densely; also returns the old labels."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        adj = [[index[v] for v in self.out_adj[u] if v in index] for u in keep]
        return Digraph(len(keep), adj), keep

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Image under the vertex map ``u -> perm[u]``."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs():
            adj[perm[u]].append(perm[v])
        return Digraph(self.n, adj)


def load_digraph(text: str) -> Digraph:
    """Parse the line format: vertex count, then ``u: v1 v2 ...`` per vertex."""
    n: int | None = None
    adj: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise DigraphFormatError(lineno, f"expected vertex count, got {line!r}") from None
            if n < 1:
                raise DigraphFormatError(lineno, "vertex count must be positive")
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise DigraphFormatError(lineno, "missing ':' after vertex index")
        try:
            u = int(head)
            nbrs = [int(tok) for tok in tail.split()]
        except ValueError:
            raise DigraphFormatError(lineno, f"non-integer token in {line!r}") from None
        if u != len(adj):
            raise DigraphFormatError(lineno, f"expected vertex {len(adj)}, got {u}")
        if u >= n:
            raise DigraphFormatError(lineno, f"vertex {u} beyond declared count {n}")
        seen = set()
        for v in nbrs:
            if v == u:
                raise DigraphFormatError(lineno, f"self-loop at vertex {u}")
            if not 0 <= v < n:
                raise DigraphFormatError(lineno, f"index {v} out of range 0..{n - 1}")
            if v in seen:
                raise DigraphFormatError(lineno, f"duplicate arc {u}->{v}")
            seen.add(v)
        adj.append(nbrs)
    if n is None:
        raise DigraphFormatError(0, "empty input")
    if len(adj) != n:
        raise DigraphFormatError(0, f"declared {n} vertices but found {len(adj)} adjacency lines")
    return Digraph(n, adj)


def store_digraph(g: Digraph) -> str:
    lines = [str(g.n)]
    for u, nbrs in enumerate(g.out_adj):
        lines.append(f"{u}: " + " ".join(map(str, nbrs)) if nbrs else f"{u}:")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WalkCountTable:
    """``counts[u][v]`` = number of walks u -> v of length 0..k."""

    k: int
    counts: tuple[tuple[int, ...], ...]

    def __getitem__(self, uv: tuple[int, int]) -> int:
        u, v = uv
        return self.counts[u][v]

    def unreached(self, u: int) -> list[int]:
        return [v for v, c in enumerate(self.counts[u]) if c == 0]


def walk_counts(g: Digraph, k: int) -> WalkCountTable:
    if k < 1:
        raise ValueError("walk horizon must be >= 1")
    rows = []
    for u in range(g.n):
        layer = [0] * g.n
        layer[u] = 1
        total = layer[:]
        for _ in range(k):
            nxt = [0] * g.n
            for w, c in enumerate(layer):
                if c:
                    for v in g.out_adj[w]:
                        nxt[v] += c
            layer = nxt
            for v, c in enumerate(layer):
                total[v] += c
        rows.append(tuple(total))
    return WalkCountTable(k, tuple(rows))


@dataclass(frozen=True)
class GeodecityReport:
    ok: bool
    witness: tuple[int, int, tuple[int, ...], tuple[int, ...]] | None = None


def walks_between(g: Digraph, u: int, v: int, k: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All walks u -> v of length <= k, shortest first within DFS order."""
    found: list[tuple[int, ...]] = []
    path = [u]

    def dfs(x: int, depth: int) -> bool:
        if x == v:
            found.append(tuple(path))
            if limit is not None and len(found) >= limit:
                return True
        if depth == k:
            return False
        for y in g.out_adj[x]:
            path.append(y)
            if dfs(y, depth + 1):
                return True
            path.pop()
        return False

    dfs(u, 0)
    return found


def is_k_geodetic(g: Digraph, k: int) -> GeodecityReport:
    table = walk_counts(g, k)
    for u, row in enumerate(table.counts):
        for v, c in enumerate(row):
            if c > 1:
                w1, w2 = walks_between(g, u, v, k, limit=2)
                return GeodecityReport(False, (u, v, w1, w2))
    return GeodecityReport(True)


def is_diregular(g: Digraph, d: int) -> bool:
    return all(g.out_degree(u) == d and g.in_degree(u) == d for u in range(g.n))


@dataclass(frozen=True)
class ExcessProfile:
    d: int
    k: int
    n: int
    moore: int
    excess: int
    diregular: bool
    geodetic: bool

    @property
    def is_excess_one(self) -> bool:
        return self.diregular and self.geodetic and self.excess == 1


def excess_profile(g: Digraph, d: int, k: int) -> ExcessProfile:
    if d < 1 or k < 1:
        raise ValueError("excess_profile needs d >= 1 and k >= 1")
    moore = moore_bound(d, k)
    return ExcessProfile(
        d=d,
        k=k,
        n=g.n,
        moore=moore,
        excess=g.n - moore,
        diregular=is_diregular(g, d),
        geodetic=is_k_geodetic(g, k).ok,
    )


@dataclass(frozen=True)
class OutlierMap:
    o: tuple[int, ...]
    o_inv: tuple[int, ...]

    def __call__(self, u: int) -> int:
        return self.o[u]

    def inverse(self) -> OutlierMap:
        return OutlierMap(self.o_inv, self.o)


def outlier_map(g: Digraph, k: int) -> OutlierMap:
    """The unique unreachable vertex of every row, checked to be an automorphism."""
    from .automorphism import VertexPermutation, is_automorphism

    d = g.out_degree(0)
    profile = excess_profile(g, d, k)
    table = walk_counts(g, k)
    o = []
    for u in range(g.n):
        missing = table.unreached(u)
        if len(missing) != 1:
            raise NotExcessOne(
                f"vertex {u} misses {len(missing)} vertices within distance {k}; expected exactly 1"
            )
        o.append(missing[0])
    if not profile.is_excess_one:
        raise NotExcessOne(
            f"not a ({d},{k};+1)-digraph: n={g.n}, moore={profile.moore}, "
            f"diregular={profile.diregular}, geodetic={profile.geodetic}"
        )
    if len(set(o)) != g.n:
        raise NotAutomorphism("outlier function is not a bijection")
    if not is_automorphism(g, VertexPermutation(o)):
        raise NotAutomorphism("outlier function is not an automorphism")
    inv = [0] * g.n
    for u, v in enumerate(o):
        inv[v] = u
    return OutlierMap(tuple(o), tuple(inv))


def converse(g: Digraph) -> Digraph:
    return Digraph(g.n, g.in_adj)


def common_out_neighbours(g: Digraph, u: int, v: int) -> frozenset[int]:
    if u == v:
        raise ValueError("common_out_neighbours needs distinct vertices")
    return frozenset(g.out_adj[u]).intersection(g.out_adj[v])


def common_in_neighbours(g: Digraph, u: int, v: int) -> frozenset[int]:
    if u == v:
        raise ValueError("common_in_neighbours needs distinct vertices")
    return frozenset(g.in_adj[u]).intersection(g.in_adj[v])


class VertexType(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"


def vertex_type(g: Digraph, k: int, o: OutlierMap, u: int) -> VertexType:
    return VertexType.TYPE_II if g.has_arc(o(u), u) else VertexType.TYPE_I


def closed_walk_trace(g: Digraph, r: int) -> int:
    """Trace of A**r: closed walks of length r summed over start vertices."""
    if r < 1:
        raise ValueError("walk length must be >= 1")
    total = 0
    for u in range(g.n):
        layer = {u: 1}
        for _ in range(r):
            nxt: dict[int, int] = {}
            for w, c in layer.items():
                for v in g.out_adj[w]:
                    nxt[v] = nxt.get(v, 0) + c
            layer = nxt
        total += layer.get(u, 0)
    return total


def count_cycles_of_length(g: Digraph, length: int) -> int:
    """Directed cycles with ``length`` distinct vertices, one per rotation class."""
    if length < 2:
        raise ValueError("cycle length must be >= 2")
    count = 0
    for s in range(g.n):
        # anchor each cycle at its smallest vertex
        on_path = {s}

        def extend(x: int, depth: int) -> int:
            found = 0
            for y in g.out_adj[x]:
                if depth == length and y == s:
                    found += 1
                elif depth < length and y > s and y not in on_path:
                    on_path.add(y)
                    found += extend(y, depth + 1)
                    on_path.discard(y)
            return found

        count += extend(s, 1)
    return count


def verify_path_identity(g: Digraph, k: int, o: OutlierMap) -> bool:
    """Check I + A + ... + A**k == J - P entrywise."""
    table = walk_counts(g, k)
    return all(
        table.counts[u][v] == (0 if v == o(u) else 1)
        for u in range(g.n)
        for v in range(g.n)
    )
