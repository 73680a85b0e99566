"""Exhaustive search for diregular k-geodetic digraphs of order M(d,k)+1.

Out-neighbour sets are assigned vertex by vertex in label order. Labels are
introduced in first-use order (vertex 0 points to 1..d, and any new label in
a set is the smallest label not yet used), and a vertex must have been used
before its own set is assigned; every strongly connected digraph has such a
labelling, so no isomorphism class is lost. Completed digraphs are
deduplicated by canonical form.

Pruning rules:

* k-geodecity of the partial digraph (walk counts only grow as arcs are
  added), checked with reach bitsets;
* in-degree at most d;
* transposition rule: two vertices with equal out-neighbourhoods are each
  other's outlier, so a third vertex with the same set is impossible and the
  two may not reach each other within k steps;
* common-out rule, used for d = 3 and k >= 2 only: two vertices share at most one
  out-neighbour. This rule rests on a theorem about degree three, so a
  search that relies on it reports ``theorem_dependent=True``.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .arithmetic import moore_bound
from .canon import canonical_digraph, canonical_form
from .checkpoint import Checkpoint, read_checkpoint, write_checkpoint
from .digraph import Digraph, excess_profile
from .errors import CheckpointError

MAX_ORDER = 40


@dataclass(frozen=True)
class SearchConfig:
    d: int
    k: int
    node_budget: int | None = None
    workers: int = 1
    checkpoint: str | Path | None = None
    common_out_rule: bool = True
    transposition_rule: bool = True
    prefix_depth: int | None = None

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise ValueError("d and k must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.order > MAX_ORDER:
            raise ValueError(f"order {self.order} is beyond the searchable range")

    @property
    def order(self) -> int:
        return moore_bound(self.d, self.k) + 1

    @property
    def uses_common_out_rule(self) -> bool:
        return self.common_out_rule and self.d == 3 and self.k >= 2

    @property
    def flags(self) -> int:
        return int(self.uses_common_out_rule) | (int(self.transposition_rule) << 1)

    def resolved_prefix_depth(self) -> int:
        if self.prefix_depth is not None:
            return max(1, min(self.prefix_depth, self.order))
        return min(self.order, moore_bound(self.d, self.k - 1) + 1)


@dataclass
class SearchResult:
    exhausted: bool
    found: list[Digraph]
    nodes: int
    wall_time: float = field(default=0.0, compare=False)
    theorem_dependent: bool = False


class _Budget(Exception):
    def __init__(self, path: tuple[int, ...]):
        self.path = path


class _State:
    """Mutable partial assignment shared by one DFS."""

    def __init__(self, d: int, k: int, common_out: bool, transposition: bool, n: int | None = None):
        # n may be overridden to enumerate strongly connected d-diregular
        # k-geodetic digraphs of another order (the structural rules are then
        # meaningless and should be off)
        self.d, self.k = d, k
        self.n = moore_bound(d, k) + 1 if n is None else n
        self.common_out = common_out
        self.transposition = transposition
        self.outs: list[tuple[int, ...]] = [()] * self.n
        self.masks = [0] * self.n
        self.indeg = [0] * self.n
        self.next_new = 1
        self.equal_pairs: list[tuple[int, int]] = []
        self.reach = self._reach()

    def _reach(self) -> list[int] | None:
        """Reach sets within k-1 steps, or None if some pair has two walks."""
        n, outs = self.n, self.outs
        prev = [1 << u for u in range(n)]
        cnt = [1] * n
        for _ in range(self.k):
            cur, ccur = [], []
            for u in range(n):
                b, c = 1 << u, 1
                for x in outs[u]:
                    b |= prev[x]
                    c += cnt[x]
                if b.bit_count() != c:
                    return None
                cur.append(b)
                ccur.append(c)
            last = prev
            prev, cnt = cur, ccur
        self.reach_k = prev
        return last

    def candidate_sets(self, v: int):
        """Out-neighbour sets for v passing the local checks, lexicographic."""
        d, reach, indeg = self.d, self.reach, self.indeg
        used = [x for x in range(self.next_new) if x != v and indeg[x] < d and not (reach[x] >> v) & 1]
        new_start = self.next_new
        chosen: list[int] = []

        def rec(i: int, acc: int, new_taken: int):
            if len(chosen) == d:
                yield tuple(chosen), new_taken
                return
            need = d - len(chosen)
            for idx in range(i, len(used)):
                if len(used) - idx + (self.n - new_start - new_taken) < need:
                    break
                x = used[idx]
                if reach[x] & acc:
                    continue
                chosen.append(x)
                yield from rec(idx + 1, acc | reach[x], new_taken)
                chosen.pop()
            # new labels come after every used label, consecutively
            x = new_start + new_taken
            if x < self.n:
                chosen.append(x)
                yield from rec(len(used), acc | (1 << x), new_taken + 1)
                chosen.pop()

        yield from rec(0, 1 << v, 0)

    def children(self, v: int):
        """Apply each admissible out-set of v in turn; yields with it applied."""
        if v >= self.next_new:
            return
        for nbrs, new_taken in self.candidate_sets(v):
            mask = 0
            for x in nbrs:
                mask |= 1 << x
            if not self._structural_ok(v, nbrs, mask):
                continue
            old_next, old_reach, old_reach_k = self.next_new, self.reach, self.reach_k
            pairs_len = len(self.equal_pairs)
            self.outs[v] = nbrs
            self.masks[v] = mask
            for x in nbrs:
                self.indeg[x] += 1
            self.next_new += new_taken
            if self.transposition:
                for u in range(v):
                    if self.masks[u] == mask:
                        self.equal_pairs.append((u, v))
            reach = self._reach()
            if reach is not None and self._pairs_ok():
                self.reach = reach
                yield nbrs
            for x in nbrs:
                self.indeg[x] -= 1
            self.outs[v] = ()
            self.masks[v] = 0
            self.next_new = old_next
            self.reach, self.reach_k = old_reach, old_reach_k
            del self.equal_pairs[pairs_len:]

    def _structural_ok(self, v: int, nbrs: tuple[int, ...], mask: int) -> bool:
        if self.common_out:
            for u in range(v):
                if (self.masks[u] & mask).bit_count() > 1:
                    return False
        if self.transposition:
            same = sum(1 for u in range(v) if self.masks[u] == mask)
            if same >= 2:
                return False
        return True

    def _pairs_ok(self) -> bool:
        rk = self.reach_k
        for u, w in self.equal_pairs:
            if (rk[u] >> w) & 1 or (rk[w] >> u) & 1:
                return False
        return True

    def digraph(self) -> Digraph:
        return Digraph(self.n, self.outs)


def _new_state(cfg_tuple: tuple) -> _State:
    d, k, common_out, transposition = cfg_tuple
    return _State(d, k, common_out and d == 3 and k >= 2, transposition)


def _prefix_tasks(cfg_tuple: tuple, depth: int) -> tuple[list[tuple[int, ...]], int]:
    """Choice stacks of all nodes at the split depth, plus nodes above it."""
    st = _new_state(cfg_tuple)
    tasks: list[tuple[int, ...]] = []
    nodes = 0
    stack: list[int] = []

    def rec(v: int):
        nonlocal nodes
        if v == depth:
            tasks.append(tuple(stack))
            return
        for i, _ in enumerate(st.children(v)):
            nodes += 1
            stack.append(i)
            rec(v + 1)
            stack.pop()

    rec(0)
    return tasks, nodes


def _run_task(cfg_tuple: tuple, stack: tuple[int, ...], budget: int | None,
              resume: tuple[int, ...] = ()):
    """Explore the subtree below a prefix.

    ``resume`` is the choice path inside the subtree where an earlier run
    stopped; nodes along it were already counted. Returns (nodes, digraphs,
    None) when the subtree is finished, or (nodes, digraphs, path) with the
    path to resume from when the budget ran out.
    """
    st = _new_state(cfg_tuple)
    nodes = 0
    found: list[Digraph] = []
    path: list[int] = []

    def replay(v: int):
        if v == len(stack):
            explore(v, resume)
            return
        for i, _ in enumerate(st.children(v)):
            if i == stack[v]:
                replay(v + 1)
                return
        raise CheckpointError("prefix stack does not match the search tree")

    def explore(v: int, again: tuple[int, ...]):
        nonlocal nodes
        if v == st.n:
            g = st.digraph()
            if excess_profile(g, st.d, st.k).is_excess_one:
                found.append(g)
            return
        first = again[0] if again else 0
        for i, _ in enumerate(st.children(v)):
            if i < first:
                continue
            if i == first and len(again) > 1:
                # counted before the interruption
                path.append(i)
                explore(v + 1, again[1:])
                path.pop()
                continue
            if budget is not None and nodes >= budget:
                raise _Budget(tuple(path) + (i,))
            nodes += 1
            path.append(i)
            explore(v + 1, ())
            path.pop()

    try:
        replay(0)
    except _Budget as stop:
        return nodes, found, stop.path
    return nodes, found, None


def _merge(into: dict[bytes, Digraph], graphs) -> None:
    for g in graphs:
        key = canonical_form(g)
        if key not in into:
            into[key] = canonical_digraph(g)


def search_excess_one(cfg: SearchConfig) -> SearchResult:
    """Exhaustively search for (d,k;+1)-digraphs under ``cfg``.

    With a checkpoint path, progress is saved after every finished task and
    when the node budget runs out; an existing checkpoint file is resumed.
    The budget counts every node this call explores, including the nodes
    above the split depth, so it must exceed those to make progress.
    """
    start = time.perf_counter()
    cfg_tuple = (cfg.d, cfg.k, cfg.common_out_rule, cfg.transposition_rule)
    depth = cfg.resolved_prefix_depth()
    found: dict[bytes, Digraph] = {}
    done_nodes = 0
    first_task = 0
    resume_stack: tuple[int, ...] | None = None

    cp_path = Path(cfg.checkpoint) if cfg.checkpoint is not None else None
    if cp_path is not None and cp_path.exists():
        cp = read_checkpoint(cp_path)
        if (cp.d, cp.k) != (cfg.d, cfg.k):
            raise CheckpointError(f"checkpoint is for d={cp.d} k={cp.k}, not d={cfg.d} k={cfg.k}")
        if cp.flags != cfg.flags:
            raise CheckpointError("checkpoint was written with different pruning rules")
        depth = cp.prefix_depth
        done_nodes, first_task, resume_stack = cp.nodes, cp.next_task, cp.stack
        _merge(found, cp.found)

    tasks, prefix_nodes = _prefix_tasks(cfg_tuple, depth)
    if first_task > len(tasks):
        raise CheckpointError("checkpoint task index out of range")
    inner: tuple[int, ...] = ()
    if resume_stack is not None and first_task < len(tasks):
        if resume_stack[:depth] != tasks[first_task]:
            raise CheckpointError("checkpoint task does not match the search tree")
        inner = resume_stack[depth:]

    run_nodes = prefix_nodes  # nodes explored by this invocation, for the budget

    def save(next_task: int, inside: tuple[int, ...] = ()):
        if cp_path is None:
            return
        stack = tasks[next_task] + inside if next_task < len(tasks) else ()
        write_checkpoint(cp_path, Checkpoint(
            cfg.d, cfg.k, depth, cfg.flags, next_task, stack, done_nodes,
            tuple(found[key] for key in sorted(found))))

    def finish(exhausted: bool) -> SearchResult:
        return SearchResult(
            exhausted=exhausted,
            found=[found[key] for key in sorted(found)],
            nodes=prefix_nodes + done_nodes,
            wall_time=time.perf_counter() - start,
            theorem_dependent=cfg.uses_common_out_rule,
        )

    if cfg.workers == 1:
        for t in range(first_task, len(tasks)):
            remaining = None if cfg.node_budget is None else max(0, cfg.node_budget - run_nodes)
            nodes, graphs, stopped = _run_task(cfg_tuple, tasks[t], remaining, inner if t == first_task else ())
            run_nodes += nodes
            done_nodes += nodes
            _merge(found, graphs)
            if stopped is not None:
                save(t, stopped)
                return finish(False)
            save(t + 1)
        return finish(True)

    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        pending = {}
        window = 4 * cfg.workers
        t_next = first_task
        for t in range(first_task, len(tasks)):
            while t_next < len(tasks) and t_next < t + window:
                resume = inner if t_next == first_task else ()
                pending[t_next] = pool.submit(_run_task, cfg_tuple, tasks[t_next], None, resume)
                t_next += 1
            nodes, graphs, _ = pending.pop(t).result()
            run_nodes += nodes
            done_nodes += nodes
            _merge(found, graphs)
            save(t + 1)
            if cfg.node_budget is not None and run_nodes > cfg.node_budget and t + 1 < len(tasks):
                for fut in pending.values():
                    fut.cancel()
                return finish(False)
    return finish(True)
