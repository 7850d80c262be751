import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolattr.errors import CapacityError, StructuralError
from boolattr.model import (
    BooleanNetwork,
    Dnf,
    Literal,
    SignedArc,
    Term,
    UpdateMode,
    async_successors,
    changing_genes,
    derive_interaction_graph,
    eval_dnf,
    eval_term,
    format_state,
    negate_dnf,
    parse_state,
    state_bits,
    state_from_bits,
    successors,
    sync_step,
    validate_network,
)

from conftest import all_configs, dnfs, e1_lambda, naive_eval, naive_image, naive_successors, networks, to_int


def test_state_encoding_gene0_first():
    assert state_from_bits((1, 0)) == 1
    assert format_state(1, 2) == "10"
    assert parse_state("01") == 2
    assert state_bits(6, 3) == (0, 1, 1)


@given(st.integers(1, 12), st.data())
def test_state_roundtrip(n, data):
    x = data.draw(st.integers(0, (1 << n) - 1))
    assert parse_state(format_state(x, n)) == x
    assert state_from_bits(state_bits(x, n)) == x


def test_bad_states():
    with pytest.raises(StructuralError):
        parse_state("012")
    with pytest.raises(StructuralError):
        state_from_bits((0, 2))


def test_update_mode_parse():
    assert UpdateMode.parse("synchronous") is UpdateMode.SYNC
    assert UpdateMode.parse("ASYNC") is UpdateMode.ASYNC
    with pytest.raises(ValueError):
        UpdateMode.parse("block")


def test_empty_term_and_dnf_constants():
    assert eval_term(Term(), 0, 3)
    assert not eval_dnf(Dnf(), 7, 3)
    assert eval_dnf(Dnf.constant(True), 0, 1)


def test_eval_width_check():
    with pytest.raises(StructuralError):
        eval_dnf(Dnf.identity(3), (0, 1))
    with pytest.raises(StructuralError):
        eval_dnf(Dnf.identity(0), 4, 2)


def test_e1_sync_step_matches_lambda(e1):
    for bits in all_configs(2):
        assert sync_step(e1, bits) == e1_lambda(*bits)


def test_e1_async_successors(e1):
    # 01 -> 11 or 00 ; 10 -> 00 or 11 ; 11 -> 10 ; 00 fixed
    def succ(s):
        return {format_state(y, 2) for y in async_successors(e1, parse_state(s))}

    assert succ("00") == set()
    assert succ("11") == {"10"}
    assert succ("10") == {"00", "11"}
    assert succ("01") == {"00", "11"}


def test_tuple_in_tuple_out(e1):
    assert successors(e1, (1, 1), "async") == frozenset({(1, 0)})
    assert successors(e1, 3, "async") == frozenset({1})


def test_malformed_network_raises():
    net = BooleanNetwork(("a", "b"), (Dnf.identity(5), Dnf.identity(1)))
    with pytest.raises(StructuralError):
        sync_step(net, 0)
    report = validate_network(net)
    assert not report.ok


@settings(max_examples=200, deadline=None)
@given(networks(max_n=6))
def test_step_functions_match_naive(net):
    for bits in all_configs(net.n):
        assert sync_step(net, bits) == naive_image(net, bits)
        assert set(async_successors(net, bits)) == set(naive_successors(net, bits, "async"))
        assert changing_genes(net, bits) == {i for i, (a, b) in enumerate(zip(bits, naive_image(net, bits))) if a != b}


@settings(max_examples=200, deadline=None)
@given(networks(max_n=6))
def test_fixed_points_agree_between_modes(net):
    for x in range(net.num_states):
        assert (not successors(net, x, "sync")) == (not successors(net, x, "async"))
        assert (sync_step(net, x) == x) == (not async_successors(net, x))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), dnfs(n))))
def test_negation_is_pointwise_complement(arg):
    n, d = arg
    neg = negate_dnf(d)
    for bits in all_configs(n):
        assert naive_eval(neg, bits) == 1 - naive_eval(d, bits)
        assert eval_dnf(d, to_int(bits), n) == bool(naive_eval(d, bits))


def test_negate_constants():
    assert negate_dnf(Dnf()) == Dnf.constant(True)
    assert negate_dnf(Dnf.constant(True)) == Dnf()


def test_negate_cap():
    big = Dnf(tuple(Term((Literal(2 * i), Literal(2 * i + 1))) for i in range(13)))
    with pytest.raises(CapacityError):
        negate_dnf(big)


def test_interaction_graph_e1(e1):
    ig = derive_interaction_graph(e1)
    assert ig.arcs == {SignedArc(1, "+", 0), SignedArc(0, "+", 1), SignedArc(1, "-", 1)}
    assert not ig.approximate


def test_interaction_graph_ignores_non_influential_literal():
    # f0 = a | (a & b): b has no effect
    f = Dnf((Term.of(0), Term.of(0, 1)))
    net = BooleanNetwork(("a", "b"), (f, Dnf.identity(1)))
    ig = derive_interaction_graph(net)
    assert SignedArc(1, "+", 0) not in ig and SignedArc(1, "-", 0) not in ig


@settings(max_examples=100, deadline=None)
@given(networks(max_n=5))
def test_interaction_graph_definition(net):
    ig = derive_interaction_graph(net)
    expect = set()
    for bits in all_configs(net.n):
        for i in range(net.n):
            if bits[i]:
                continue
            hi = list(bits)
            hi[i] = 1
            for j, f in enumerate(net.functions):
                a, b = naive_eval(f, bits), naive_eval(f, hi)
                if b > a:
                    expect.add(SignedArc(i, "+", j))
                if a > b:
                    expect.add(SignedArc(i, "-", j))
    assert ig.arcs == expect


def test_interaction_graph_probe_limit():
    f = Dnf((Term(tuple(Literal(i) for i in range(5))),))
    net = BooleanNetwork(tuple("abcde"), (f,) + tuple(Dnf.identity(i) for i in range(1, 5)))
    with pytest.raises(CapacityError):
        derive_interaction_graph(net, probe_limit=3)
    ig = derive_interaction_graph(net, probe_limit=3, approximate_ok=True)
    assert ig.approximate and SignedArc(4, "+", 0) in ig


def test_validation_findings():
    net = BooleanNetwork.build(["a", "b", "a"], [Dnf((Term.of(0, (0, False)),)), None, Dnf.identity(0)])
    report = validate_network(net)
    msgs = [str(f) for f in report]
    assert any("duplicate" in m for m in msgs)
    assert any("unsatisfiable" in m for m in msgs)
    assert any("keeps its value" in m for m in msgs)
    assert not report.ok
