"""Shared fixtures and independent reference implementations.

The helpers here deliberately avoid the package's bit-mask kernels: they
evaluate functions literal by literal on bit tuples and find attractors with
networkx, so that agreement with the package is meaningful.
"""

from __future__ import annotations

import itertools
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import strategies as st

from boolattr.generate import random_network
from boolattr.model import BooleanNetwork, Dnf, Literal, Term
from boolattr.parser import load_network

DATA = Path(__file__).parent / "data"


def e1_lambda(x1, x2):
    return (x2, int(x1 and not x2))


@pytest.fixture
def e1() -> BooleanNetwork:
    return load_network(DATA / "two_gene.bnet")


# --------------------------------------------------------------------------
# naive semantics on bit tuples (gene 0 first)


def all_configs(n):
    return list(itertools.product((0, 1), repeat=n))


def to_int(bits):
    return sum(b << i for i, b in enumerate(bits))


def naive_eval(dnf: Dnf, bits) -> int:
    for term in dnf.terms:
        if all(bits[lit.gene] == (1 if lit.positive else 0) for lit in term.literals):
            return 1
    return 0


def naive_image(net: BooleanNetwork, bits):
    return tuple(naive_eval(f, bits) for f in net.functions)


def naive_successors(net, bits, mode):
    img = naive_image(net, bits)
    if img == bits:
        return []
    if mode == "sync":
        return [img]
    out = []
    for i in range(net.n):
        if img[i] != bits[i]:
            y = list(bits)
            y[i] = img[i]
            out.append(tuple(y))
    return out


def label(bits):
    return "".join(map(str, bits))


def nx_graph(net, mode) -> nx.DiGraph:
    g = nx.DiGraph()
    for bits in all_configs(net.n):
        g.add_node(label(bits))
        for y in naive_successors(net, bits, mode):
            g.add_edge(label(bits), label(y))
    return g


def nx_attractors(net, mode) -> set:
    """{(kind, key)} for fixed points, stable cycles and complex attractors."""
    g = nx_graph(net, mode)
    out = set()
    for comp in nx.attracting_components(g):
        comp = sorted(comp)
        if len(comp) == 1:
            out.add(("fixed_point", (comp[0],)))
            continue
        if all(g.out_degree(v) == 1 for v in comp):
            start = min(comp)
            order = [start]
            v = next(iter(g.successors(start)))
            while v != start:
                order.append(v)
                v = next(iter(g.successors(v)))
            out.add(("stable_cycle", tuple(order)))
        else:
            out.add(("complex", tuple(comp)))
    return out


def stable_keys(keys: set) -> set:
    return {k for k in keys if k[0] != "complex"}


# --------------------------------------------------------------------------
# hypothesis strategies


@st.composite
def dnfs(draw, n, max_terms=4, max_literals=3, min_terms=0):
    count = draw(st.integers(min_terms, max_terms))
    terms = []
    for _ in range(count):
        k = draw(st.integers(0, min(max_literals, n)))
        genes = draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
        signs = draw(st.lists(st.booleans(), min_size=k, max_size=k))
        terms.append(Term(tuple(Literal(g, s) for g, s in zip(sorted(genes), signs))))
    return Dnf(tuple(terms))


@st.composite
def networks(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    funcs = tuple(draw(dnfs(n, min_terms=1)) for _ in range(n))
    return BooleanNetwork(tuple(f"g{i}" for i in range(n)), funcs)


seeded_networks = st.builds(random_network, st.integers(2, 7), st.integers(0, 10_000))


# --------------------------------------------------------------------------
# acceptance summary

ACCEPTANCE: list[str] = []


def record_criterion(name: str, ok: bool, detail: str = "") -> bool:
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
