import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolattr.attractors import Attractor
from boolattr.engine import (
    ALL,
    EngineConfig,
    ExclusionOverlap,
    ExclusionSet,
    check_stability,
    detect_repeat,
    enumerate_paths,
    exclude_attractor,
    extract_cycle,
    find_all_attractors,
    is_valid_path,
    make_path,
)
from boolattr.errors import DomainError, ResourceError
from boolattr.generate import random_network
from boolattr.model import BooleanNetwork, Dnf, Literal, Term, format_state, parse_state
from boolattr.oracle import build_transition_graph, classify_attractors, transient_and_period

from conftest import networks, nx_attractors, seeded_networks, stable_keys


def P(*labels, mode="sync"):
    return make_path([parse_state(s) for s in labels], mode)


def rendered(paths, n=2):
    return [p.render(n) for p in paths]


def test_enumerate_e1_sync_t1(e1):
    got = rendered(enumerate_paths(e1, "sync", 1))
    assert got == [["00", "00"], ["10", "01"], ["01", "10"], ["11", "10"]]


def test_enumerate_e1_async_t1(e1):
    got = sorted(map(tuple, rendered(enumerate_paths(e1, "async", 1))))
    assert got == sorted([("00", "00"), ("01", "11"), ("01", "00"), ("10", "00"), ("10", "11"), ("11", "10")])


def test_enumerate_order_is_deterministic(e1):
    got = [p.configs for p in enumerate_paths(e1, "async", 1)]
    # schedule genes ascending: from 2 ("01") gene 0 flips first, giving 3
    assert got == [(0, 0), (1, 0), (1, 3), (2, 3), (2, 0), (3, 1)]


def test_enumerate_with_exclusion(e1):
    got = rendered(enumerate_paths(e1, "sync", 2, ExclusionSet({parse_state("00")})))
    assert [p[0] for p in got] == ["10", "01", "11"]
    assert all("00" not in p for p in got)


def test_enumerate_rejects_zero_length(e1):
    with pytest.raises(ValueError):
        list(enumerate_paths(e1, "sync", 0))


def test_schedule_markers(e1):
    sync = P("11", "10", "01")
    assert [s.updated for s in sync.schedule] == [ALL, ALL]
    asyn = make_path([3, 1, 0, 0], "async")
    assert [s.updated for s in asyn.schedule] == [1, 0, None]
    assert is_valid_path(e1, "async", asyn)
    assert not is_valid_path(e1, "async", make_path([3, 2], "async"))


def test_detect_repeat_examples():
    assert detect_repeat(P("00", "00")) == 0
    assert detect_repeat(P("11", "10", "01", "10")) == 1
    assert detect_repeat(P("01", "11", "10", "00")) is None


def test_extract_cycle_examples():
    labels = lambda c: tuple(format_state(x, 2) for x in c)  # noqa: E731
    assert labels(extract_cycle(P("11", "10", "01", "10"), 1)) == ("10", "01")
    assert labels(extract_cycle(P("10", "01", "10"), 0)) == ("10", "01")
    a, b, c = 1, 2, 3
    assert extract_cycle(make_path([a, b, c, b], "sync"), 1) == (b, c)
    # degenerate segment: inner repeat wins
    assert extract_cycle(make_path([a, b, a, b], "async"), 1) == (b, a)


def test_check_stability_examples(e1):
    assert check_stability(e1, [parse_state("01"), parse_state("10")], "sync")
    assert not check_stability(e1, [parse_state("11"), parse_state("10")], "async")
    assert check_stability(e1, [0], "async")
    with pytest.raises(DomainError):
        check_stability(e1, [parse_state("11"), parse_state("01")], "sync")


def test_exclusion_examples():
    excl = exclude_attractor(ExclusionSet(), Attractor.fixed_point(0, 2))
    assert set(excl) == {0}
    exclude_attractor(excl, Attractor.cycle([2, 1], 2))
    assert set(excl) == {0, 1, 2}
    with pytest.raises(ExclusionOverlap):
        exclude_attractor(excl, [1])


def test_e1_sync(e1):
    res = find_all_attractors(e1, mode="sync")
    assert [str(a) for a in res.attractors] == ["fixed_point(00)", "stable_cycle(01, 10)"]
    assert res.unstable_cycles == [] and res.exhausted


def test_e1_async(e1):
    res = find_all_attractors(e1, mode="async")
    assert [str(a) for a in res.attractors] == ["fixed_point(00)"]
    assert len(res.unstable_cycles) == 1
    assert {format_state(x, 2) for x in res.unstable_cycles[0]} == {"10", "11"}


@pytest.mark.parametrize("mode", ["sync", "async"])
@pytest.mark.parametrize("strategy", ["search", "enumerate"])
def test_single_gene_flip(mode, strategy):
    net = BooleanNetwork(("g",), (Dnf((Term((Literal(0, False),)),)),))
    res = find_all_attractors(net, mode=mode, strategy=strategy)
    assert [str(a) for a in res.attractors] == ["stable_cycle(0, 1)"]


def test_config_validation():
    with pytest.raises(ValueError):
        EngineConfig(initial_length=0)
    with pytest.raises(ValueError):
        EngineConfig(initial_length=8, length_cap=4)
    with pytest.raises(ValueError):
        EngineConfig(strategy="sat")


def test_length_cap_reports_partial():
    net = random_network(6, 11)
    with pytest.raises(ResourceError) as exc:
        find_all_attractors(net, mode="sync", length_cap=1)
    assert exc.value.cap == 1
    assert exc.value.partial is not None


def test_complex_only_network_warns():
    # two independent togglers: the async graph is one 4-state SCC, so there is no stable cycle
    net = BooleanNetwork(("a", "b"), (Dnf((Term((Literal(0, False),)),)), Dnf((Term((Literal(1, False),)),))))
    tg = build_transition_graph(net, "async")
    assert [a.kind for a in classify_attractors(tg)] == ["complex"]
    res = find_all_attractors(net, mode="async")
    assert res.attractors == [] and res.warnings and "explicit" in res.warnings[0]


@settings(max_examples=150, deadline=None)
@given(networks(max_n=6), st.sampled_from(["sync", "async"]))
def test_completeness_against_networkx(net, mode):
    res = find_all_attractors(net, mode=mode)
    assert res.keys() == stable_keys(nx_attractors(net, mode))


@settings(max_examples=80, deadline=None)
@given(networks(max_n=5), st.sampled_from(["sync", "async"]))
def test_strategies_agree(net, mode):
    a = find_all_attractors(net, mode=mode, strategy="search")
    b = find_all_attractors(net, mode=mode, strategy="enumerate")
    assert a.keys() == b.keys()
    assert [x.key for x in a.attractors] == [x.key for x in b.attractors]


@settings(max_examples=80, deadline=None)
@given(networks(max_n=5), st.sampled_from(["sync", "async"]), st.sampled_from(["search", "enumerate"]))
def test_emitted_paths_valid_and_avoid_exclusions(net, mode, strategy):
    excluded = set()
    seen = []

    def on_path(p):
        assert is_valid_path(net, mode, p)
        assert not excluded.intersection(p.configs)
        seen.append(p)

    def on_exclude(states):
        assert not excluded & states
        excluded.update(states)

    res = find_all_attractors(net, mode=mode, strategy=strategy, on_path=on_path, on_exclude=on_exclude)
    assert excluded == set(res.exclusions)
    stable_states = {x for a in res.attractors for x in a.states}
    assert stable_states <= excluded
    assert seen


@settings(max_examples=100, deadline=None)
@given(seeded_networks, st.sampled_from(["sync", "async"]))
def test_termination_bound(net, mode):
    res = find_all_attractors(net, mode=mode)
    tg = build_transition_graph(net, mode)
    t, p = transient_and_period(tg)
    assert res.final_length <= 2 * (t + p)
    assert res.passes[-1].path_found is False
    assert not list(enumerate_paths(net, mode, res.final_length, ExclusionSet(res.exclusions)))


@settings(max_examples=60, deadline=None)
@given(seeded_networks, st.sampled_from(["sync", "async"]), st.integers(1, 4))
def test_determinism_and_workers(net, mode, workers):
    a = find_all_attractors(net, mode=mode)
    b = find_all_attractors(net, mode=mode, workers=workers)
    assert a.attractors == b.attractors
    assert a.unstable_cycles == b.unstable_cycles
    assert a.final_length == b.final_length


@settings(max_examples=60, deadline=None)
@given(seeded_networks, st.sampled_from([2, 3, 5]))
def test_initial_length_does_not_change_answer(net, n0):
    for mode in ("sync", "async"):
        assert find_all_attractors(net, mode=mode, initial_length=n0).keys() == find_all_attractors(net, mode=mode).keys()


@settings(max_examples=60, deadline=None)
@given(seeded_networks)
def test_attractor_sets_disjoint_and_unique(net):
    for mode in ("sync", "async"):
        res = find_all_attractors(net, mode=mode)
        states = [x for a in res.attractors for x in a.states]
        assert len(states) == len(set(states))
        assert len(res.keys()) == len(res.attractors)
        assert res.attractors == sorted(res.attractors, key=Attractor.sort_key)
