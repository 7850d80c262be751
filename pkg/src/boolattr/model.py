"""Boolean networks with DNF local functions and their one-step dynamics.

Configurations are plain ``int`` values: gene ``i`` is bit ``i`` (little-endian
by declaration order), so a network with ``n`` genes has states
``0 .. 2**n - 1``.  The public step functions also accept a tuple of 0/1 values
in gene order and then answer in the same form.  When a configuration is shown
to a person it is rendered as a bit string with the first declared gene on the
left (see :func:`format_state`).
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError, StructuralError

DEFAULT_TERM_CAP = 4096
PROBE_LIMIT = 24


class UpdateMode(str, enum.Enum):
    SYNC = "sync"
    ASYNC = "async"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text in ("sync", "synchronous"):
            return cls.SYNC
        if text in ("async", "asynchronous"):
            return cls.ASYNC
        raise ValueError(f"unknown update mode {value!r}")

    def __str__(self):
        return self.value


# --------------------------------------------------------------------------
# states


def state_from_bits(bits: Sequence[int]) -> int:
    x = 0
    for i, b in enumerate(bits):
        if b not in (0, 1, True, False):
            raise StructuralError(f"configuration entries must be 0/1, got {b!r}")
        if b:
            x |= 1 << i
    return x


def state_bits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def format_state(x: int, n: int) -> str:
    """Bit string of ``x`` with gene 0 first, e.g. ``format_state(1, 2) == "10"``."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def parse_state(text: str) -> int:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise StructuralError(f"not a bit string: {text!r}")
    return state_from_bits([int(c) for c in text])


def _as_state(x, n=None) -> tuple[int, int | None, bool]:
    """Normalise ``x`` to ``(int, width, was_tuple)``."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        x = int(x)
        if x < 0 or (n is not None and x >> n):
            raise StructuralError(f"configuration {x} does not fit {n} genes")
        return x, n, False
    bits = tuple(x)
    if n is not None and len(bits) != n:
        raise StructuralError(f"configuration width {len(bits)} != network size {n}")
    return state_from_bits(bits), len(bits), True


# --------------------------------------------------------------------------
# DNF terms


@dataclass(frozen=True, order=True)
class Literal:
    gene: int
    positive: bool = True

    def __post_init__(self):
        if self.gene < 0:
            raise StructuralError(f"negative gene index {self.gene}")

    def __invert__(self):
        return Literal(self.gene, not self.positive)


@dataclass(frozen=True)
class Term:
    """Conjunction of literals.  The empty term is the constant true."""

    literals: tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))

    @classmethod
    def of(cls, *specs):
        """``Term.of(0, (1, False))`` is ``g0 & !g1``; plain ints are positive literals."""
        lits = []
        for s in specs:
            if isinstance(s, Literal):
                lits.append(s)
            elif isinstance(s, tuple):
                lits.append(Literal(*s))
            else:
                lits.append(Literal(int(s)))
        return cls(tuple(lits))

    @cached_property
    def masks(self) -> tuple[int, int]:
        pos = neg = 0
        for lit in self.literals:
            if lit.positive:
                pos |= 1 << lit.gene
            else:
                neg |= 1 << lit.gene
        return pos, neg

    @property
    def satisfiable(self) -> bool:
        pos, neg = self.masks
        return not (pos & neg)

    def max_gene(self) -> int:
        return max((lit.gene for lit in self.literals), default=-1)


@dataclass(frozen=True)
class Dnf:
    """Disjunction of terms.  The empty DNF is the constant false."""

    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def identity(cls, gene: int) -> Dnf:
        return cls((Term((Literal(gene),)),))

    @classmethod
    def constant(cls, value: bool) -> Dnf:
        return cls((Term(),)) if value else cls()

    @cached_property
    def masks(self) -> tuple[tuple[int, int], ...]:
        return tuple(t.masks for t in self.terms)

    def support(self) -> list[int]:
        return sorted({lit.gene for t in self.terms for lit in t.literals})

    def max_gene(self) -> int:
        return max((t.max_gene() for t in self.terms), default=-1)

    def __len__(self):
        return len(self.terms)


def _check_width(max_gene: int, n):
    if n is not None and max_gene >= n:
        raise StructuralError(f"literal on gene {max_gene} outside a {n}-gene configuration")


def eval_term(term: Term, x, n=None) -> bool:
    x, n, _ = _as_state(x, n)
    _check_width(term.max_gene(), n)
    pos, neg = term.masks
    return (x & pos) == pos and not (x & neg)


def eval_dnf(d: Dnf, x, n=None) -> bool:
    x, n, _ = _as_state(x, n)
    _check_width(d.max_gene(), n)
    return any((x & p) == p and not (x & q) for p, q in d.masks)


def eval_dnf_vector(d: Dnf, states: np.ndarray) -> np.ndarray:
    """Evaluate ``d`` on an integer array of configurations at once."""
    out = np.zeros(states.shape, dtype=bool)
    for p, q in d.masks:
        out |= ((states & p) == p) & ((states & q) == 0)
    return out


# Working representation for DNF algebra: frozenset of (gene, positive) pairs.

def _term_key(term: Term) -> frozenset:
    return frozenset((lit.gene, lit.positive) for lit in term.literals)


def _key_term(key: frozenset) -> Term:
    return Term(tuple(Literal(g, p) for g, p in sorted(key)))


def _consistent(key: frozenset) -> bool:
    genes = [g for g, _ in key]
    return len(genes) == len(set(genes))


def conjoin_terms(left: list[frozenset], right: list[frozenset], cap: int) -> list[frozenset]:
    """Distribute ``(OR left) AND (OR right)``; drops contradictions and duplicates."""
    out, seen = [], set()
    for a in left:
        for b in right:
            merged = a | b
            if merged in seen or not _consistent(merged):
                continue
            seen.add(merged)
            out.append(merged)
            if len(out) > cap:
                raise CapacityError(f"DNF exceeds {cap} terms during distribution")
    return out


def disjoin_terms(*parts: list[frozenset]) -> list[frozenset]:
    out, seen = [], set()
    for part in parts:
        for key in part:
            if key not in seen and _consistent(key):
                seen.add(key)
                out.append(key)
    return out


def dnf_from_keys(keys: Iterable[frozenset]) -> Dnf:
    return Dnf(tuple(_key_term(k) for k in keys))


def negate_dnf(d: Dnf, cap: int = DEFAULT_TERM_CAP) -> Dnf:
    """DNF of the complement of ``d`` (De Morgan, then distribution).

    Unsatisfiable and duplicate terms are removed; no further minimisation.
    """
    acc = [frozenset()]
    for term in d.terms:
        clause = [frozenset({(lit.gene, not lit.positive)}) for lit in term.literals]
        acc = conjoin_terms(acc, clause, cap)
        if not acc:
            break
    return dnf_from_keys(acc)


def format_dnf(d: Dnf, names: Sequence[str]) -> str:
    if not d.terms:
        return "0"
    rendered = []
    for term in d.terms:
        if not term.literals:
            return "1"
        lits = [("" if lit.positive else "!") + names[lit.gene] for lit in term.literals]
        body = " & ".join(lits)
        if len(lits) > 1 and len(d.terms) > 1:
            body = f"({body})"
        rendered.append(body)
    return " | ".join(rendered)


# --------------------------------------------------------------------------
# networks


@dataclass(frozen=True)
class BooleanNetwork:
    """Ordered genes with one DNF update function each.

    ``inputs`` lists genes whose function was not given and defaulted to the
    identity (they keep their value).  Construction is lenient so that
    :func:`validate_network` can report problems; the step functions raise
    :class:`StructuralError` on a malformed network.
    """

    names: tuple[str, ...]
    functions: tuple[Dnf, ...]
    inputs: frozenset[int] = field(default=frozenset(), compare=False)
    name: str = field(default="network", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "inputs", frozenset(self.inputs))

    @classmethod
    def build(cls, names, functions, name="network"):
        """Build from a list of functions where ``None`` means "keeps its value"."""
        funcs, inputs = [], set()
        functions = list(functions) + [None] * (len(names) - len(functions))
        for i, f in enumerate(functions):
            if f is None:
                funcs.append(Dnf.identity(i))
                inputs.add(i)
            else:
                funcs.append(f)
        return cls(tuple(names), tuple(funcs), frozenset(inputs), name)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def num_states(self) -> int:
        return 1 << self.n

    def index(self, gene_name: str) -> int:
        try:
            return self.names.index(gene_name)
        except ValueError:
            raise KeyError(gene_name) from None

    @cached_property
    def masks(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        if len(self.functions) != self.n:
            raise StructuralError(
                f"{self.n} genes but {len(self.functions)} update functions"
            )
        for j, f in enumerate(self.functions):
            if f.max_gene() >= self.n:
                raise StructuralError(
                    f"function of {self.names[j]!r} references gene {f.max_gene()} "
                    f"but the network has {self.n} genes"
                )
        return tuple(f.masks for f in self.functions)

    # Fast integer-only kernels; callers guarantee 0 <= x < 2**n.

    def _next(self, x: int) -> int:
        y = 0
        for i, terms in enumerate(self.masks):
            for p, q in terms:
                if (x & p) == p and not (x & q):
                    y |= 1 << i
                    break
        return y

    def _changes(self, x: int) -> int:
        return self._next(x) ^ x

    def sync_table(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Synchronous successor of every state in ``range(start, stop)``."""
        stop = self.num_states if stop is None else stop
        dtype = np.uint32 if self.n <= 32 else np.uint64
        states = np.arange(start, stop, dtype=dtype)
        out = np.zeros_like(states)
        self.masks  # validates
        for i, f in enumerate(self.functions):
            out |= eval_dnf_vector(f, states).astype(dtype) << dtype(i)
        return out


def _net_state(net: BooleanNetwork, x):
    x, _, as_tuple = _as_state(x, net.n)
    net.masks  # raises on malformed networks
    return x, as_tuple


def _out(net, x, as_tuple):
    return state_bits(x, net.n) if as_tuple else x


def sync_step(net: BooleanNetwork, x):
    x, as_tuple = _net_state(net, x)
    return _out(net, net._next(x), as_tuple)


def changing_genes(net: BooleanNetwork, x) -> frozenset[int]:
    x, _ = _net_state(net, x)
    diff = net._changes(x)
    return frozenset(i for i in range(net.n) if (diff >> i) & 1)


def async_successors(net: BooleanNetwork, x) -> frozenset:
    """States reachable by updating exactly one gene whose value would change."""
    x, as_tuple = _net_state(net, x)
    diff = net._changes(x)
    return frozenset(
        _out(net, x ^ (1 << i), as_tuple) for i in range(net.n) if (diff >> i) & 1
    )


def successors(net: BooleanNetwork, x, mode) -> frozenset:
    """Successor set in the transition graph; empty exactly at fixed points."""
    mode = UpdateMode.parse(mode)
    if mode is UpdateMode.ASYNC:
        return async_successors(net, x)
    y = sync_step(net, x)
    return frozenset() if y == x else frozenset({y})


# --------------------------------------------------------------------------
# interaction graph


@dataclass(frozen=True, order=True)
class SignedArc:
    source: int
    sign: str
    target: int

    def __post_init__(self):
        if self.sign not in "+-" or len(self.sign) != 1:
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")


@dataclass(frozen=True)
class InteractionGraph:
    arcs: frozenset[SignedArc]
    approximate: bool = False

    def __contains__(self, arc):
        return arc in self.arcs

    def __len__(self):
        return len(self.arcs)


def derive_interaction_graph(
    net: BooleanNetwork, probe_limit: int = PROBE_LIMIT, approximate_ok: bool = False
) -> InteractionGraph:
    """Signed regulation arcs found by probing every function on its support.

    ``(i, '+', j)`` is present when raising gene ``i`` can raise ``f_j`` with all
    other genes fixed, ``(i, '-', j)`` when it can lower it.  Functions whose
    support exceeds ``probe_limit`` genes raise :class:`CapacityError`, unless
    ``approximate_ok`` is set: then their arcs are read off literal polarities
    and the result is flagged ``approximate``.
    """
    net.masks
    arcs = set()
    approximate = False
    for j, f in enumerate(net.functions):
        support = f.support()
        k = len(support)
        if k > probe_limit:
            if not approximate_ok:
                raise CapacityError(
                    f"function of {net.names[j]!r} depends on {k} genes; "
                    f"probing is limited to {probe_limit}"
                )
            approximate = True
            for term in f.terms:
                if term.satisfiable:
                    for lit in term.literals:
                        arcs.add(SignedArc(lit.gene, "+" if lit.positive else "-", j))
            continue
        if k == 0:
            continue
        pos = {g: b for b, g in enumerate(support)}
        local = Dnf(tuple(
            Term(tuple(Literal(pos[lit.gene], lit.positive) for lit in t.literals))
            for t in f.terms
        ))
        states = np.arange(1 << k, dtype=np.uint32)
        values = eval_dnf_vector(local, states)
        for b, g in enumerate(support):
            low = states[(states >> b) & 1 == 0]
            v0 = values[low]
            v1 = values[low | (1 << b)]
            if np.any(v1 & ~v0):
                arcs.add(SignedArc(g, "+", j))
            if np.any(v0 & ~v1):
                arcs.add(SignedArc(g, "-", j))
    return InteractionGraph(frozenset(arcs), approximate)


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning" | "info"
    message: str
    gene: str | None = None

    def __str__(self):
        where = f" [{self.gene}]" if self.gene else ""
        return f"{self.severity}{where}: {self.message}"


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def errors(self):
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self):
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self):
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)


def validate_network(net: BooleanNetwork) -> ValidationReport:
    report = ValidationReport()
    add = report.findings.append
    seen = {}
    for i, name in enumerate(net.names):
        if name in seen:
            add(Finding("error", f"duplicate gene name (positions {seen[name]} and {i})", name))
        else:
            seen[name] = i
    n = net.n

    def label(j):
        return net.names[j] if j < n else f"#{j}"

    if len(net.functions) < n:
        for j in range(len(net.functions), n):
            add(Finding("error", "gene has no update function", label(j)))
    elif len(net.functions) > n:
        add(Finding("error", f"{len(net.functions)} functions for {n} genes"))
    for j in sorted(net.inputs):
        add(Finding("warning", "no update function given; the gene keeps its value", label(j)))
    for j, f in enumerate(net.functions):
        for k, term in enumerate(f.terms):
            bad = sorted({lit.gene for lit in term.literals if lit.gene >= n})
            if bad:
                add(Finding("error", f"term {k + 1} references undeclared gene index {bad}", label(j)))
            if not term.satisfiable:
                add(Finding("warning", f"term {k + 1} is unsatisfiable (gene and its negation)", label(j)))
            if len(set(term.literals)) != len(term.literals):
                add(Finding("warning", f"term {k + 1} repeats a literal", label(j)))
    return report
