"""Attractor values with rotation-invariant canonical keys, and the cycle stability test."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .errors import DomainError
from .model import BooleanNetwork, UpdateMode, _as_state, format_state, successors

FIXED_POINT = "fixed_point"
STABLE_CYCLE = "stable_cycle"
COMPLEX = "complex"
KIND_ORDER = {FIXED_POINT: 0, STABLE_CYCLE: 1, COMPLEX: 2}


def canonical_rotation(states: Sequence[int], n: int) -> tuple[int, ...]:
    """Rotate a cycle so it starts at its lexicographically smallest bit string."""
    states = tuple(states)
    if not states:
        return states
    labels = [format_state(x, n) for x in states]
    k = labels.index(min(labels))
    return states[k:] + states[:k]


@dataclass(frozen=True)
class Attractor:
    """A fixed point, a stable cycle, or (explicit engine only) a complex attractor.

    Build instances through :meth:`fixed_point`, :meth:`cycle` or :meth:`complex`
    so that ``states`` is already in canonical order.
    """

    kind: str
    states: tuple[int, ...]
    n: int

    @classmethod
    def fixed_point(cls, x: int, n: int) -> Attractor:
        return cls(FIXED_POINT, (x,), n)

    @classmethod
    def cycle(cls, states: Sequence[int], n: int) -> Attractor:
        if len(states) == 1:
            return cls.fixed_point(states[0], n)
        return cls(STABLE_CYCLE, canonical_rotation(states, n), n)

    @classmethod
    def complex(cls, states, n: int) -> Attractor:
        return cls(COMPLEX, tuple(sorted(states, key=lambda x: format_state(x, n))), n)

    @property
    def key(self) -> tuple[str, ...]:
        return tuple(format_state(x, self.n) for x in self.states)

    @property
    def period(self) -> int | None:
        return None if self.kind == COMPLEX else len(self.states)

    @property
    def state_set(self) -> frozenset[int]:
        return frozenset(self.states)

    def sort_key(self):
        return KIND_ORDER[self.kind], self.key

    def __str__(self):
        return f"{self.kind}({', '.join(self.key)})"


def cycle_is_stable(net: BooleanNetwork, cycle: Sequence, mode, allow_fixed: bool = False) -> bool:
    """True iff every state of ``cycle`` has exactly the next cycle state as successor.

    ``cycle`` must be a cycle of the dynamics: distinct states, each followed by
    one of its successors (the last wraps to the first).  Anything else raises
    :class:`DomainError`.  With ``allow_fixed`` a single fixed point counts as a
    stable cycle of length one.
    """
    mode = UpdateMode.parse(mode)
    states = [_as_state(x, net.n)[0] for x in cycle]
    if len(set(states)) != len(states):
        raise DomainError("cycle states are not distinct")
    if len(states) == 1 and allow_fixed:
        if successors(net, states[0], mode):
            raise DomainError(f"{format_state(states[0], net.n)} is not a fixed point")
        return True
    if len(states) < 2:
        raise DomainError("a cycle needs at least two states")
    stable = True
    for k, x in enumerate(states):
        nxt = states[(k + 1) % len(states)]
        succ = successors(net, x, mode)
        if nxt not in succ:
            raise DomainError(
                f"{format_state(nxt, net.n)} is not a successor of {format_state(x, net.n)}"
            )
        if len(succ) != 1:
            stable = False
    return stable
