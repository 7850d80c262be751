"""Seeded random networks and DNFs for testing and benchmarking."""

from __future__ import annotations

import random

from .model import BooleanNetwork, Dnf, Literal, Term


def random_term(rng: random.Random, n: int, max_literals: int = 3) -> Term:
    k = rng.randint(1, min(max_literals, n))
    genes = sorted(rng.sample(range(n), k))
    return Term(tuple(Literal(g, rng.random() < 0.5) for g in genes))


def random_dnf(rng: random.Random, n: int, max_terms: int = 4, max_literals: int = 3,
               min_terms: int = 1) -> Dnf:
    count = rng.randint(min_terms, max_terms)
    return Dnf(tuple(random_term(rng, n, max_literals) for _ in range(count)))


def random_network(n: int, seed: int, max_terms: int = 4, max_literals: int = 3) -> BooleanNetwork:
    """Network of ``n`` genes ``x0..x{n-1}``; every function has 1..max_terms terms."""
    rng = random.Random(seed)
    names = [f"x{i}" for i in range(n)]
    functions = [random_dnf(rng, n, max_terms, max_literals) for _ in range(n)]
    return BooleanNetwork(tuple(names), tuple(functions), name=f"random_n{n}_s{seed}")
