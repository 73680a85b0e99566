"""Vertex permutations, fixed sets and the cycle structure of outlier maps."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .arithmetic import lcm, moore_bound
from .digraph import Digraph, excess_profile
from .errors import NotAutomorphism


@dataclass(frozen=True)
class VertexPermutation:
    images: tuple[int, ...]

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("not a bijection on 0..n-1")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> VertexPermutation:
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Iterable[int]]) -> VertexPermutation:
        images = list(range(n))
        for cyc in cycles:
            cyc = list(cyc)
            for i, u in enumerate(cyc):
                images[u] = cyc[(i + 1) % len(cyc)]
        return cls(images)

    @classmethod
    def parse(cls, text: str) -> VertexPermutation:
        return cls(int(tok) for tok in text.split())

    def serialize(self) -> str:
        return " ".join(map(str, self.images))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, u: int) -> int:
        return self.images[u]

    def __mul__(self, other: VertexPermutation) -> VertexPermutation:
        """``(self * other)(u) == self(other(u))``."""
        return VertexPermutation(self.images[v] for v in other.images)

    def __pow__(self, e: int) -> VertexPermutation:
        if e < 0:
            return self.inverse() ** (-e)
        result, base = VertexPermutation.identity(len(self)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> VertexPermutation:
        inv = [0] * len(self.images)
        for u, v in enumerate(self.images):
            inv[v] = u
        return VertexPermutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = []
            u = start
            while not seen[u]:
                seen[u] = True
                cyc.append(u)
                u = self.images[u]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles()))


def is_automorphism(g: Digraph, phi: VertexPermutation) -> bool:
    if len(phi) != g.n:
        raise ValueError(f"permutation has length {len(phi)}, digraph has {g.n} vertices")
    return all(g.has_arc(phi(u), phi(v)) for u, v in g.arcs())


def fix_set(phi: VertexPermutation) -> frozenset[int]:
    return frozenset(u for u, v in enumerate(phi.images) if u == v)


class FixTag(enum.Enum):
    NULL = "Null"
    TWO_ISOLATED = "TwoIsolated"
    CYCLE_K_PLUS_2 = "CycleKplus2"
    SUB_EXCESS_ONE = "SubExcessOne"
    WHOLE_GRAPH = "WholeGraph"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class FixClassification:
    tag: FixTag
    fix_size: int
    d_prime: int | None = None

    def __str__(self) -> str:
        if self.tag is FixTag.SUB_EXCESS_ONE:
            return f"{self.tag.value}({self.d_prime}) size={self.fix_size}"
        return f"{self.tag.value} size={self.fix_size}"


def _is_directed_cycle(g: Digraph) -> bool:
    if any(g.out_degree(u) != 1 or g.in_degree(u) != 1 for u in range(g.n)):
        return False
    u, steps = 0, 0
    while True:
        u = g.out_adj[u][0]
        steps += 1
        if u == 0:
            return steps == g.n


def classify_fix_subdigraph(g: Digraph, k: int, phi: VertexPermutation) -> FixClassification:
    """Classify the subdigraph induced by the vertices ``phi`` fixes."""
    if not is_automorphism(g, phi):
        raise NotAutomorphism("classify_fix_subdigraph needs an automorphism")
    fixed = fix_set(phi)
    size = len(fixed)
    if size == g.n:
        return FixClassification(FixTag.WHOLE_GRAPH, size)
    if size == 0:
        return FixClassification(FixTag.NULL, 0)
    sub, _ = g.induced(fixed)
    if size == 2:
        tag = FixTag.TWO_ISOLATED if sub.size == 0 else FixTag.INCONSISTENT
        return FixClassification(tag, 2)
    if size == k + 2 and _is_directed_cycle(sub):
        return FixClassification(FixTag.CYCLE_K_PLUS_2, size, 1)
    d_prime = sub.out_degree(0)
    if d_prime >= 1 and size == moore_bound(d_prime, k) + 1:
        if excess_profile(sub, d_prime, k).is_excess_one:
            return FixClassification(FixTag.SUB_EXCESS_ONE, size, d_prime)
    return FixClassification(FixTag.INCONSISTENT, size)


@dataclass(frozen=True)
class PermutationVector:
    """Census ``{cycle length j: number of j-cycles}``; zero entries dropped."""

    counts: tuple[tuple[int, int], ...]

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]]):
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: Counter[int] = Counter()
        for j, m in items:
            if j < 1 or m < 0:
                raise ValueError(f"bad permutation vector entry {j}:{m}")
            merged[j] += m
        object.__setattr__(self, "counts", tuple(sorted((j, m) for j, m in merged.items() if m)))

    @classmethod
    def parse(cls, text: str) -> PermutationVector:
        pairs = []
        for tok in text.replace(",", " ").split():
            j, _, m = tok.partition(":")
            pairs.append((int(j), int(m)))
        return cls(pairs)

    def serialize(self) -> str:
        return " ".join(f"{j}:{m}" for j, m in self.counts)

    def __str__(self) -> str:
        return self.serialize()

    def __getitem__(self, j: int) -> int:
        return dict(self.counts).get(j, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def total(self) -> int:
        return sum(j * m for j, m in self.counts)

    @property
    def lengths(self) -> list[int]:
        return [j for j, _ in self.counts]


def permutation_vector(phi: VertexPermutation) -> PermutationVector:
    return PermutationVector(Counter(len(c) for c in phi.cycles()))


def m_stats(pv: PermutationVector, j: int) -> tuple[int, int, int]:
    """(odd cycles, even cycles, all cycles) among lengths divisible by ``j``."""
    if j < 1:
        raise ValueError("divisor must be >= 1")
    odd = sum(m for L, m in pv.counts if L % j == 0 and L % 2)
    even = sum(m for L, m in pv.counts if L % j == 0 and not L % 2)
    return odd, even, odd + even


def vertex_order(phi: VertexPermutation, u: int) -> int:
    steps, v = 1, phi(u)
    while v != u:
        v = phi(v)
        steps += 1
    return steps


def index(phi: VertexPermutation) -> int:
    return min(len(c) for c in phi.cycles())


class StructureTag(enum.Enum):
    OUTLIER_REGULAR = "OutlierRegular"
    TYPE_A = "TypeA"
    TYPE_B = "TypeB"
    OTHER = "Other"


@dataclass(frozen=True)
class OutlierStructure:
    tag: StructureTag
    index: int

    def __str__(self) -> str:
        if self.tag is StructureTag.OUTLIER_REGULAR:
            return f"{self.tag.value}({self.index})"
        return f"{self.tag.value} index={self.index}"


def classify_pv(pv: PermutationVector, k: int) -> OutlierStructure:
    if pv[1]:
        raise ValueError("outlier permutations have no fixed points")
    lengths = pv.lengths
    low = lengths[0]
    if len(lengths) == 1:
        return OutlierStructure(StructureTag.OUTLIER_REGULAR, low)
    if low == 2 and pv[2] == 1:
        return OutlierStructure(StructureTag.TYPE_B, 2)
    # the induced (k+2)-cycle itself needs the digraph; see the module docs
    if low == k + 2 and pv[k + 2] == 1:
        return OutlierStructure(StructureTag.TYPE_A, low)
    return OutlierStructure(StructureTag.OTHER, low)


def classify_outlier_structure(o: VertexPermutation, k: int) -> OutlierStructure:
    """Outlier-regular / Type A / Type B from the cycle type alone.

    Type A here only means the minimum cycle length is k+2 and occurs once;
    whether those vertices induce a directed cycle is for the caller to check.
    """
    if fix_set(o):
        raise ValueError("outlier permutations have no fixed points")
    return classify_pv(permutation_vector(o), k)


def check_path_order_divisibility(g: Digraph, k: int, o: VertexPermutation) -> bool:
    """Every interior vertex order on a <=k path divides lcm of the end orders."""
    orders = [vertex_order(o, u) for u in range(g.n)]
    path: list[int] = []

    def ok_from(x: int, depth: int) -> bool:
        if depth >= 2:
            t = lcm(orders[path[0]], orders[x])
            if any(t % orders[w] for w in path[1:-1]):
                return False
        if depth == k:
            return True
        for y in g.out_adj[x]:
            path.append(y)
            if not ok_from(y, depth + 1):
                return False
            path.pop()
        return True

    for u in range(g.n):
        path[:] = [u]
        if not ok_from(u, 0):
            return False
    return True
