"""Bounded path search for attractors with length doubling and exclusions.

The search works on configuration sequences ("paths") of a fixed number of
transitions ``t``.  A path starts anywhere, follows the chosen update mode and
stutters once it sits on a fixed point.  When the last configuration of a path
already occurred earlier, the states in between form a cycle (or a fixed
point).  Stable cycles and fixed points are recorded as attractors; every
cycle found, stable or not, has its states excluded from all later paths.

A pass at length ``t`` looks at every path of that length that avoids the
excluded states.  After a pass that found something new the same length is
searched again; a pass that found paths but nothing new doubles ``t``; the
run ends as soon as no path of the current length exists.

Two strategies realise a pass:

``"enumerate"``
    streams every path literally (:func:`enumerate_paths`).  Exponential in
    ``t``; meant for small networks and for checking the other strategy.
``"search"``
    asks the same questions of the path space without listing it: a cycle of
    at most ``t`` transitions is sought from each start state in turn (only
    through larger, non-excluded states), and when none is left a breadth-first
    sweep of set-valued frontiers decides whether any path of length ``t``
    remains.  Every path it reports is materialised as a :class:`PathAssignment`
    and goes through the same repeat/extract/stability/exclusion steps.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field

import numpy as np

from .attractors import Attractor, canonical_rotation, cycle_is_stable
from .errors import BoolNetError, ResourceError
from .model import BooleanNetwork, UpdateMode, format_state

log = logging.getLogger(__name__)

ALL = "all"
DEFAULT_LENGTH_CAP = 1 << 20


@dataclass(frozen=True)
class ScheduleStep:
    """Which gene was left unblocked for one step.

    ``updated`` is a gene index (asynchronous), ``"all"`` (synchronous) or
    ``None`` for a stutter at an asynchronous fixed point.
    """

    updated: int | str | None


@dataclass(frozen=True)
class PathAssignment:
    configs: tuple[int, ...]
    schedule: tuple[ScheduleStep, ...]

    @property
    def length(self) -> int:
        return len(self.configs) - 1

    def render(self, n: int) -> list[str]:
        return [format_state(x, n) for x in self.configs]


class ExclusionOverlap(BoolNetError):
    """An attractor was excluded twice, i.e. discovered again after exclusion."""


class ExclusionSet:
    """States no later path may visit.  Only ever grows."""

    def __init__(self, states=()):
        self.states: set[int] = set(states)
        self.bits = sum(1 << x for x in self.states)

    def __contains__(self, x):
        return x in self.states

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(sorted(self.states))

    def add(self, states):
        states = set(states)
        clash = states & self.states
        if clash:
            raise ExclusionOverlap(f"states {sorted(clash)} are already excluded")
        self.states |= states
        for x in states:
            self.bits |= 1 << x
        return self

    def snapshot(self) -> frozenset[int]:
        return frozenset(self.states)


@dataclass(frozen=True)
class EngineConfig:
    mode: UpdateMode = UpdateMode.SYNC
    initial_length: int = 1
    length_cap: int = DEFAULT_LENGTH_CAP
    strategy: str = "search"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", UpdateMode.parse(self.mode))
        if self.initial_length < 1:
            raise ValueError("initial_length must be at least 1")
        if self.length_cap < self.initial_length:
            raise ValueError("length_cap must be >= initial_length")
        if self.strategy not in ("search", "enumerate"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class PassRecord:
    length: int
    new_cycles: int
    path_found: bool


@dataclass
class AttractorSet:
    n: int
    mode: UpdateMode
    attractors: list[Attractor] = field(default_factory=list)
    unstable_cycles: list[tuple[int, ...]] = field(default_factory=list)
    final_length: int = 0
    exhausted: bool = False
    passes: list[PassRecord] = field(default_factory=list)
    exclusions: ExclusionSet = field(default_factory=ExclusionSet)
    warnings: list[str] = field(default_factory=list)

    def keys(self) -> set:
        return {(a.kind, a.key) for a in self.attractors}

    def sorted(self) -> list[Attractor]:
        return sorted(self.attractors, key=Attractor.sort_key)


# --------------------------------------------------------------------------
# path-level operations


def _step_schedule(mode: UpdateMode, a: int, b: int) -> ScheduleStep:
    if mode is UpdateMode.SYNC:
        return ScheduleStep(ALL)
    if a == b:
        return ScheduleStep(None)
    return ScheduleStep((a ^ b).bit_length() - 1)


def make_path(configs, mode) -> PathAssignment:
    mode = UpdateMode.parse(mode)
    configs = tuple(configs)
    schedule = tuple(_step_schedule(mode, a, b) for a, b in zip(configs, configs[1:]))
    return PathAssignment(configs, schedule)


def is_valid_path(net: BooleanNetwork, mode, path: PathAssignment) -> bool:
    """Each step is a legal transition under its schedule, or a stutter at a fixed point."""
    mode = UpdateMode.parse(mode)
    if len(path.schedule) != path.length:
        return False
    for (a, b), step in zip(zip(path.configs, path.configs[1:]), path.schedule):
        diff = net._changes(a)
        if mode is UpdateMode.SYNC:
            if step.updated != ALL or b != a ^ diff:
                return False
        elif step.updated is None:
            if diff or b != a:
                return False
        elif not (isinstance(step.updated, int) and (diff >> step.updated) & 1
                  and b == a ^ (1 << step.updated)):
            return False
    return True


def enumerate_paths(
    net: BooleanNetwork, mode, t: int, excl: ExclusionSet | None = None
) -> Iterator[PathAssignment]:
    """Every path of ``t`` transitions that avoids ``excl``.

    Order: start states ascending, then updated gene ascending at each step.
    ``excl`` is consulted live, so states excluded while the stream is being
    consumed are honoured by every path yielded afterwards.
    """
    mode = UpdateMode.parse(mode)
    if t < 1:
        raise ValueError("path length must be at least 1")
    excl = ExclusionSet() if excl is None else excl
    net.masks

    def moves(x):
        diff = net._changes(x)
        if not diff:
            return [x]
        if mode is UpdateMode.SYNC:
            return [x ^ diff]
        return [x ^ (1 << i) for i in range(net.n) if (diff >> i) & 1]

    for x0 in range(net.num_states):
        if x0 in excl:
            continue
        configs = [x0]
        stack = [iter(moves(x0))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                configs.pop()
                continue
            if nxt in excl:
                continue
            configs.append(nxt)
            if len(configs) == t + 1:
                if not any(x in excl for x in configs):
                    yield make_path(configs, mode)
                configs.pop()
            else:
                stack.append(iter(moves(nxt)))


def detect_repeat(path: PathAssignment) -> int | None:
    """Largest ``i < t`` with ``configs[i] == configs[t]``, or None."""
    configs = path.configs
    last = configs[-1]
    for i in range(len(configs) - 2, -1, -1):
        if configs[i] == last:
            return i
    return None


def extract_cycle(path: PathAssignment, i: int) -> tuple[int, ...]:
    """States ``configs[i..t-1]`` of a repeat found by :func:`detect_repeat`.

    If the segment itself revisits a state, the innermost loop is returned
    instead.  A single state means a fixed point.
    """
    segment = path.configs[i:]
    first_seen: dict[int, int] = {}
    for k, x in enumerate(segment):
        if x in first_seen:
            return tuple(segment[first_seen[x]:k])
        first_seen[x] = k
    raise ValueError(f"index {i} is not a repeat of the last configuration")


def check_stability(net: BooleanNetwork, cycle, mode) -> bool:
    """True iff every state of the cycle has the next cycle state as its only successor.

    Synchronous cycles are always stable; a single fixed point is stable by
    definition.  Raises :class:`DomainError` if ``cycle`` is not a cycle of the
    dynamics.
    """
    return cycle_is_stable(net, cycle, mode, allow_fixed=True)


def exclude_attractor(excl: ExclusionSet, a) -> ExclusionSet:
    states = a.states if isinstance(a, Attractor) else a
    return excl.add(states)


# --------------------------------------------------------------------------
# search strategy: set-valued frontiers over bit-packed state sets


def _bits_to_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _int_to_mask(bits: int, size: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def _lowest(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def _unwind(parent: dict, x: int) -> list[int]:
    out = []
    while x is not None:
        out.append(x)
        x = parent[x]
    return out[::-1]


class _AsyncSpace:
    """State sets as Python ints (bit x set <=> state x in the set)."""

    def __init__(self, net: BooleanNetwork):
        table = net.sync_table()
        states = np.arange(net.num_states, dtype=table.dtype)
        flips = table ^ states
        self.n = net.n
        self.full = (1 << net.num_states) - 1
        self.up = []
        self.down = []
        for i in range(net.n):
            changing = ((flips >> i) & 1).astype(bool)
            low = ((states >> i) & 1) == 0
            self.up.append(_bits_to_int(changing & low))
            self.down.append(_bits_to_int(changing & ~low))
        self.fixed = _bits_to_int(flips == 0)
        self.is_fixed = (flips == 0).tolist()
        self.flip = flips.tolist()
        self.sparse_limit = 64

    def post(self, s: int) -> int:
        out = 0
        for i in range(self.n):
            k = 1 << i
            out |= ((s & self.up[i]) << k) | ((s & self.down[i]) >> k)
        return out

    def pre(self, s: int) -> int:
        out = 0
        for i in range(self.n):
            k = 1 << i
            out |= ((s >> k) & self.up[i]) | ((s << k) & self.down[i])
        return out

    def trim(self, allowed: int) -> int:
        """Largest subset where every state has a successor and a predecessor inside."""
        core = allowed & ~self.fixed
        while True:
            nxt = core & self.post(core) & self.pre(core)
            if nxt == core:
                return core
            core = nxt

    def cycle_through(self, root: int, t: int, live: int, in_live) -> list[int] | None:
        """Shortest cycle through ``root`` of at most ``t`` steps, using only
        live states larger than ``root``.

        Small frontiers are expanded state by state; once a frontier grows past
        ``sparse_limit`` the search continues on bit sets.
        """
        parent = {root: None}
        frontier = [root]
        d = 0
        while d < t:
            d += 1
            nxt = []
            for x in frontier:
                f = self.flip[x]
                while f:
                    low = f & -f
                    f ^= low
                    y = x ^ low
                    if y == root:
                        return _unwind(parent, x)
                    if y > root and in_live[y] and y not in parent:
                        parent[y] = x
                        nxt.append(y)
            if not nxt:
                return None
            frontier = nxt
            if len(frontier) > self.sparse_limit:
                break
        else:
            return None
        target = 1 << root
        layers = [sum(1 << y for y in frontier)]
        visited = sum(1 << y for y in parent)
        while d < t:
            d += 1
            img = self.post(layers[-1])
            if img & target:
                tail = []
                nxt_bits = target
                for k in range(len(layers) - 1, -1, -1):
                    x = _lowest(layers[k] & self.pre(nxt_bits))
                    tail.append(x)
                    nxt_bits = 1 << x
                return _unwind(parent, tail[-1]) + tail[-2::-1]
            fresh = ((img & live & ~visited) >> root) << root
            if not fresh:
                return None
            visited |= fresh
            layers.append(fresh)
        return None

    def some_walk(self, t: int, allowed: int) -> list[int] | None:
        layers = [allowed]
        for _ in range(t):
            nxt = self.post(layers[-1]) & allowed
            if not nxt:
                return None
            layers.append(nxt)
        x = _lowest(layers[-1])
        walk = [x]
        for k in range(t - 1, -1, -1):
            x = _lowest(layers[k] & self.pre(1 << x))
            walk.append(x)
        return walk[::-1]


class _SyncSpace:
    def __init__(self, net: BooleanNetwork):
        self.table = net.sync_table().astype(np.int64)
        self.nxt = self.table.tolist()
        self.n = net.n
        self.full = (1 << net.num_states) - 1
        fixed = self.table == np.arange(net.num_states)
        self.fixed = _bits_to_int(fixed)
        self.is_fixed = fixed.tolist()

    def trim(self, allowed: int) -> int:
        return allowed & ~self.fixed

    def cycle_through(self, root: int, t: int, live: int, in_live) -> list[int] | None:
        seq = [root]
        seen = {root}
        x = root
        for _ in range(t):
            y = self.nxt[x]
            if y == root:
                return seq
            if y < root or not in_live[y] or y in seen:
                return None
            seq.append(y)
            seen.add(y)
            x = y
        return None

    def some_walk(self, t: int, allowed: int) -> list[int] | None:
        size = len(self.nxt)
        ok = _int_to_mask(allowed, size)
        layers = [ok]
        for _ in range(t):
            cur = np.zeros(size, dtype=bool)
            cur[self.table[layers[-1]]] = True
            cur &= ok
            if not cur.any():
                return None
            layers.append(cur)
        x = int(np.flatnonzero(layers[-1])[0])
        walk = [x]
        for k in range(t - 1, -1, -1):
            x = int(np.flatnonzero(layers[k] & (self.table == x))[0])
            walk.append(x)
        return walk[::-1]


# --------------------------------------------------------------------------
# driver


class _Run:
    def __init__(self, net, cfg, on_path, on_exclude):
        self.net = net
        self.cfg = cfg
        self.mode = cfg.mode
        self.on_path = on_path
        self.on_exclude = on_exclude
        self.result = AttractorSet(net.n, cfg.mode)
        self.excl = self.result.exclusions
        self.space = None

    def emit(self, path: PathAssignment):
        if self.on_path is not None:
            self.on_path(path)

    def register(self, path: PathAssignment) -> bool:
        """Handle one emitted path; True if it revealed a new cycle."""
        i = detect_repeat(path)
        if i is None:
            return False
        cycle = extract_cycle(path, i)
        n = self.net.n
        if check_stability(self.net, cycle, self.mode):
            found = Attractor.cycle(cycle, n)
            self.result.attractors.append(found)
            log.debug("length %d: %s", path.length, found)
        else:
            rotated = canonical_rotation(cycle, n)
            self.result.unstable_cycles.append(rotated)
            log.debug("length %d: unstable cycle %s", path.length,
                      [format_state(x, n) for x in rotated])
        exclude_attractor(self.excl, cycle)
        if self.on_exclude is not None:
            self.on_exclude(frozenset(cycle))
        return True

    def pass_enumerate(self, t: int) -> tuple[int, bool]:
        found = 0
        any_path = False
        for path in enumerate_paths(self.net, self.mode, t, self.excl):
            any_path = True
            self.emit(path)
            found += self.register(path)
        return found, any_path

    def pass_search(self, t: int) -> tuple[int, bool]:
        space = self.space
        size = self.net.num_states
        live = space.trim(space.full & ~self.excl.bits)
        in_live = _int_to_mask(live, size).tolist()
        found = 0
        for root in range(size):
            if root in self.excl:
                continue
            if space.is_fixed[root]:
                cycle = [root]
            elif in_live[root]:
                cycle = space.cycle_through(root, t, live, in_live)
            else:
                continue
            if cycle is None:
                continue
            p = len(cycle)
            path = make_path([cycle[k % p] for k in range(t + 1)], self.mode)
            self.emit(path)
            found += self.register(path)
            for x in cycle:
                in_live[x] = False
                live &= ~(1 << x)
        if found:
            return found, True
        walk = space.some_walk(t, space.full & ~self.excl.bits)
        if walk is None:
            return 0, False
        self.emit(make_path(walk, self.mode))
        return 0, True

    def run(self) -> AttractorSet:
        cfg = self.cfg
        if cfg.strategy == "search":
            self.space = _AsyncSpace(self.net) if self.mode is UpdateMode.ASYNC else _SyncSpace(self.net)
            do_pass = self.pass_search
        else:
            do_pass = self.pass_enumerate
        t = cfg.initial_length
        result = self.result
        while True:
            if t > cfg.length_cap:
                result.final_length = t
                result.attractors.sort(key=Attractor.sort_key)
                raise ResourceError(
                    f"path length {t} exceeds the cap of {cfg.length_cap}", cfg.length_cap, result
                )
            found, any_path = do_pass(t)
            result.passes.append(PassRecord(t, found, any_path))
            if found:
                continue
            if not any_path:
                break
            t *= 2
        result.final_length = t
        result.exhausted = True
        result.attractors.sort(key=Attractor.sort_key)
        if self.mode is UpdateMode.ASYNC and not result.attractors:
            result.warnings.append(
                "no fixed point or stable cycle exists: every terminal behaviour is a "
                "complex attractor; use the explicit engine to list it"
            )
        return result


def find_all_attractors(
    net: BooleanNetwork,
    cfg: EngineConfig | None = None,
    *,
    on_path: Callable[[PathAssignment], None] | None = None,
    on_exclude: Callable[[frozenset], None] | None = None,
    **options,
) -> AttractorSet:
    """All fixed points and stable cycles of ``net`` under ``cfg.mode``.

    ``options`` are forwarded to :class:`EngineConfig` when ``cfg`` is None.
    ``on_path`` sees every path the search reports, ``on_exclude`` every batch
    of newly excluded states, in order.  Raises :class:`ResourceError` (with
    the partial result) when the length cap is exceeded.
    """
    cfg = EngineConfig(**options) if cfg is None else cfg
    net.masks
    return _Run(net, cfg, on_path, on_exclude).run()
