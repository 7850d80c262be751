"""Brute-force ground truth over the whole configuration space.

The transition graph is stored as the synchronous successor table of every
state; asynchronous arcs are recovered from it as single-bit flips.  Terminal
strongly connected components come from scipy's SCC routine.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .attractors import COMPLEX, FIXED_POINT, STABLE_CYCLE, Attractor, cycle_is_stable
from .errors import CapacityError
from .model import BooleanNetwork, UpdateMode, format_state

SYNC_LIMIT = 24
ASYNC_LIMIT = 20


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    mode: UpdateMode
    n: int
    table: np.ndarray  # synchronous successor of each state

    @property
    def num_states(self) -> int:
        return 1 << self.n

    @property
    def states(self) -> np.ndarray:
        return np.arange(self.num_states, dtype=self.table.dtype)

    @property
    def flips(self) -> np.ndarray:
        """Bit mask of the genes that would change, per state."""
        return self.table ^ self.states

    def successors(self, x: int) -> list[int]:
        y = int(self.table[x])
        if y == x:
            return []
        if self.mode is UpdateMode.SYNC:
            return [y]
        diff = y ^ x
        return [x ^ (1 << i) for i in range(self.n) if (diff >> i) & 1]

    def out_degree(self) -> np.ndarray:
        flips = self.flips
        if self.mode is UpdateMode.SYNC:
            return (flips != 0).astype(np.int64)
        deg = np.zeros(self.num_states, dtype=np.int64)
        for i in range(self.n):
            deg += (flips >> i) & 1
        return deg

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        states, flips = self.states, self.flips
        if self.mode is UpdateMode.SYNC:
            keep = flips != 0
            return states[keep], self.table[keep]
        src, dst = [], []
        for i in range(self.n):
            sel = ((flips >> i) & 1).astype(bool)
            src.append(states[sel])
            dst.append(states[sel] ^ states.dtype.type(1 << i))
        return np.concatenate(src), np.concatenate(dst)

    def edges(self):
        src, dst = self.edge_arrays()
        return [(int(a), int(b)) for a, b in zip(src, dst)]

    def to_csr(self) -> csr_matrix:
        src, dst = self.edge_arrays()
        data = np.ones(len(src), dtype=np.int8)
        size = self.num_states
        return csr_matrix((data, (src.astype(np.int64), dst.astype(np.int64))), shape=(size, size))


def build_transition_graph(net: BooleanNetwork, mode, workers: int = 1) -> TransitionGraph:
    mode = UpdateMode.parse(mode)
    limit = SYNC_LIMIT if mode is UpdateMode.SYNC else ASYNC_LIMIT
    if net.n > limit:
        raise CapacityError(
            f"explicit {mode.value} transition graph limited to {limit} genes; network has {net.n}"
        )
    size = net.num_states
    workers = max(1, int(workers))
    if workers == 1 or size < 4096:
        table = net.sync_table()
    else:
        bounds = np.linspace(0, size, workers + 1).astype(int)
        chunks = list(zip(bounds[:-1], bounds[1:]))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: net.sync_table(int(c[0]), int(c[1])), chunks))
        table = np.concatenate(parts)
    return TransitionGraph(mode, net.n, table)


def _scc_labels(tg: TransitionGraph) -> tuple[int, np.ndarray]:
    return connected_components(tg.to_csr(), directed=True, connection="strong")


def terminal_sccs(tg: TransitionGraph) -> list[frozenset[int]]:
    """SCCs with no arc leaving them, ordered by their smallest state."""
    count, labels = _scc_labels(tg)
    src, dst = tg.edge_arrays()
    leaving = labels[src] != labels[dst]
    open_ = np.zeros(count, dtype=bool)
    open_[labels[src[leaving]]] = True
    members: dict[int, list[int]] = {}
    for x in np.flatnonzero(~open_[labels]):
        members.setdefault(int(labels[x]), []).append(int(x))
    comps = [frozenset(v) for v in members.values()]
    return sorted(comps, key=min)


def transient_sccs(tg: TransitionGraph) -> list[tuple[int, ...]]:
    """Non-terminal SCCs with more than one state, each as a sorted tuple.

    In asynchronous mode these hold the unstable cycles; synchronous graphs
    have none.
    """
    count, labels = _scc_labels(tg)
    src, dst = tg.edge_arrays()
    leaving = labels[src] != labels[dst]
    open_ = np.zeros(count, dtype=bool)
    open_[labels[src[leaving]]] = True
    size = np.bincount(labels, minlength=count)
    members: dict[int, list[int]] = {}
    for x in np.flatnonzero(open_[labels] & (size[labels] > 1)):
        members.setdefault(int(labels[x]), []).append(int(x))
    return sorted((tuple(v) for v in members.values()), key=min)


def _order_cycle(tg: TransitionGraph, comp: frozenset[int]) -> list[int] | None:
    """The component as a successor-ordered cycle, or None if it branches."""
    start = min(comp)
    order = [start]
    x = start
    while True:
        succ = tg.successors(x)
        if len(succ) != 1:
            return None
        x = succ[0]
        if x == start:
            break
        order.append(x)
        if len(order) > len(comp):
            return None
    return order if len(order) == len(comp) else None


def classify_attractors(tg: TransitionGraph, comps=None) -> list[Attractor]:
    """Label each terminal SCC as fixed point, stable cycle or complex."""
    comps = terminal_sccs(tg) if comps is None else comps
    out = []
    for comp in comps:
        if len(comp) == 1:
            out.append(Attractor.fixed_point(next(iter(comp)), tg.n))
            continue
        order = _order_cycle(tg, comp)
        if order is None:
            out.append(Attractor.complex(comp, tg.n))
        else:
            out.append(Attractor.cycle(order, tg.n))
    return sorted(out, key=Attractor.sort_key)


def is_stable_cycle(net: BooleanNetwork, cycle, mode) -> bool:
    return cycle_is_stable(net, cycle, mode)


def transient_and_period(tg: TransitionGraph, attractors=None) -> tuple[int, int]:
    """Longest transient and longest period, as used by the engine's halting bound.

    The transient is the largest number of states on a chain of SCCs that
    avoids fixed points and stable cycles, each SCC counted with its size.  In
    synchronous mode every such SCC is a single state, so this is the usual
    longest distance to an attractor.  Complex attractors count as transient.
    """
    attractors = classify_attractors(tg) if attractors is None else attractors
    period = max((a.period for a in attractors if a.kind != COMPLEX), default=0)
    count, labels = _scc_labels(tg)
    target = np.zeros(count, dtype=bool)
    for a in attractors:
        if a.kind in (FIXED_POINT, STABLE_CYCLE):
            target[labels[a.states[0]]] = True
    size = np.bincount(labels, minlength=count)
    src, dst = tg.edge_arrays()
    ls, ld = labels[src], labels[dst]
    keep = (ls != ld) & ~target[ls] & ~target[ld]
    pairs = set(zip(ls[keep].tolist(), ld[keep].tolist()))
    succ: dict[int, list[int]] = {}
    indeg = np.zeros(count, dtype=np.int64)
    for a, b in pairs:
        succ.setdefault(a, []).append(b)
        indeg[b] += 1
    # Kahn order, then longest weighted path from the back.
    queue = deque(int(c) for c in np.flatnonzero(indeg == 0))
    topo = []
    while queue:
        c = queue.popleft()
        topo.append(c)
        for d in succ.get(c, ()):
            indeg[d] -= 1
            if indeg[d] == 0:
                queue.append(d)
    best = np.zeros(count, dtype=np.int64)
    for c in reversed(topo):
        if target[c]:
            continue
        best[c] = size[c] + max((best[d] for d in succ.get(c, ())), default=0)
    return int(best.max(initial=0)), int(period)


def to_dot(tg: TransitionGraph, attractors=None, title: str | None = None) -> str:
    """Graphviz rendering: bit-string nodes, attractor states filled."""
    attractors = classify_attractors(tg) if attractors is None else attractors
    fill = {FIXED_POINT: "lightblue", STABLE_CYCLE: "palegreen", COMPLEX: "khaki"}
    colour = {}
    for a in attractors:
        for x in a.states:
            colour[x] = fill[a.kind]
    label = title or "transition graph"
    lines = ["digraph transitions {", f'  label="{label} ({tg.mode.value})";',
             "  labelloc=t;", "  node [shape=box, fontname=monospace];"]
    for x in range(tg.num_states):
        name = format_state(x, tg.n)
        if x in colour:
            lines.append(f'  "{name}" [style=filled, fillcolor={colour[x]}];')
        else:
            lines.append(f'  "{name}";')
    for a, b in sorted(tg.edges()):
        lines.append(f'  "{format_state(a, tg.n)}" -> "{format_state(b, tg.n)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
