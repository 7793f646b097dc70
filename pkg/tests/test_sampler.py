import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from randdeg.degseq import DegreeSequence, gen_family, is_feasible
from randdeg.graph import GraphError, Multigraph
from randdeg.sampler import (
    InadmissibleSwitch,
    SamplerExhausted,
    SwitchMove,
    admissible_switches,
    apply_switch,
    choose_mode,
    cycle_ratio,
    cycle_union_count,
    default_burn_in,
    green_tail_bound_check,
    havel_hakimi,
    is_admissible,
    log_cycle_union_count,
    normalised_cycle_count,
    random_switch,
    run_chain,
    sample_configuration,
    sample_graph,
    sample_green_lengths,
    sample_green_lengths_batch,
    sample_simple_rejection,
    sample_uniform_mcmc,
    switching_bound,
)

from _graphs import cycle, edge_set, perfect_matchings, realizations, two_regular_count


def _degree_list(G):
    return sorted(G.degrees.tolist())


# ---------------------------------------------------------------- configuration model


def test_configuration_single_edge():
    for s in range(5):
        assert edge_set(sample_configuration(DegreeSequence.of([1, 1]), seed=s)) == [(0, 1)]


def test_configuration_preserves_degrees():
    D = gen_family("clique-leaves", n=60, D=5)
    G = sample_configuration(D, seed=3)
    assert _degree_list(G) == list(D.degrees)


def _is_simple_edges(edges):
    keys = [tuple(sorted(e)) for e in edges]
    return all(a != b for a, b in keys) and len(set(keys)) == len(keys)


def test_configuration_triangle_simple_fraction():
    # half-edges 0,1 on vertex 0, 2,3 on vertex 1, 4,5 on vertex 2
    owner = [0, 0, 1, 1, 2, 2]
    matchings = list(perfect_matchings(list(range(6))))
    assert len(matchings) == 15
    simple = [m for m in matchings if _is_simple_edges([(owner[a], owner[b]) for a, b in m])]
    assert Fraction(len(simple), 15) == Fraction(8, 15)
    draws = 6000
    hits = sum(sample_configuration(DegreeSequence.of([2, 2, 2]), seed=s).is_simple for s in range(draws))
    p = 8 / 15
    assert abs(hits / draws - p) <= 4 * math.sqrt(p * (1 - p) / draws)


def test_configuration_triangle_simple_outcome():
    for s in range(50):
        G = sample_configuration(DegreeSequence.of([2, 2, 2]), seed=s)
        if G.is_simple:
            assert edge_set(G) == [(0, 1), (0, 2), (1, 2)]


def test_configuration_uniform_over_matchings():
    D = DegreeSequence.of([1, 1, 1, 1])
    counts = Counter(tuple(edge_set(sample_configuration(D, seed=s))) for s in range(3000))
    assert len(counts) == 3
    assert chisquare(list(counts.values())).pvalue > 0.001


# ---------------------------------------------------------------- rejection


def test_rejection_single_edge_first_try():
    G = sample_simple_rejection(DegreeSequence.of([1, 1]), seed=0)
    assert edge_set(G) == [(0, 1)]
    assert sample_graph(DegreeSequence.of([1, 1]), seed=0, mode="reject").tries == 1


def test_rejection_two_stars_is_double_star():
    D = gen_family("two-stars", n=6)
    for s in range(30):
        E = edge_set(sample_graph(D, seed=s, mode="reject").graph)
        # hubs 4 and 5 (degree 3) are adjacent and each takes two of the leaves 0..3
        assert (4, 5) in E
        leaves = Counter(v for e in E if e != (4, 5) for v in e if v >= 4)
        assert leaves == {4: 2, 5: 2}
        assert all(e[0] < 4 <= e[1] for e in E if e != (4, 5))


def test_rejection_exhaustion():
    D = gen_family("two-stars", n=200)
    with pytest.raises(SamplerExhausted) as exc:
        sample_simple_rejection(D, seed=0, max_tries=20)
    assert exc.value.tries == 20


def test_rejection_exhaustion_falls_back_in_auto():
    D = gen_family("two-stars", n=200)
    s = sample_graph(D, seed=0, mode="auto", max_tries=5)
    assert s.mode == "mcmc" and s.graph.is_simple


# ---------------------------------------------------------------- Havel-Hakimi


@pytest.mark.parametrize("n", range(2, 7))
def test_havel_hakimi_realises_every_feasible_sequence(n):
    for degs in itertools.combinations_with_replacement(range(1, n), n):
        if sum(degs) % 2 or not is_feasible(DegreeSequence.of(degs)):
            continue
        G = havel_hakimi(DegreeSequence.of(degs))
        assert G.is_simple and _degree_list(G) == list(degs)


def test_havel_hakimi_infeasible_raises():
    with pytest.raises(Exception):
        havel_hakimi(DegreeSequence.of([1, 1, 4, 4, 4]))


def test_burn_in_zero_returns_start():
    D = gen_family("three-regular-leaves", k=10)
    assert sample_uniform_mcmc(D, seed=1, burn_in=0) == havel_hakimi(D)
    assert sample_graph(D, seed=1, mode="mcmc", burn_in=0).graph == havel_hakimi(D)


def test_default_burn_in():
    assert default_burn_in(4) == math.ceil(40 * math.log(5))


# ---------------------------------------------------------------- switchings


C4 = Multigraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_switch_on_four_cycle_with_existing_edges_is_rejected():
    # (1,2),(3,4) in 1-indexed labels would add 3-2 and 1-4, both present
    mv = SwitchMove(0, 1, 2, 3)
    assert not is_admissible(C4, mv)
    with pytest.raises(InadmissibleSwitch):
        apply_switch(C4, mv)


def test_switch_on_four_cycle_other_orientation():
    # (1,2),(4,3) adds 4-2 and 1-3: the 4-cycle 1-3-2-4
    G = apply_switch(C4, SwitchMove(0, 1, 3, 2))
    assert edge_set(G) == [(0, 2), (0, 3), (1, 2), (1, 3)]
    assert edge_set(apply_switch(G, SwitchMove(0, 1, 3, 2).reverse())) == edge_set(C4)


def test_switch_shared_vertex_rejected():
    # b == x
    assert not is_admissible(C4, SwitchMove(0, 1, 1, 2))


def test_switch_parallel_edge_rejected():
    P = Multigraph.from_edges(4, [(0, 1), (2, 3), (0, 3)])
    # adds 2-1 and 0-3; 0-3 already present
    assert not is_admissible(P, SwitchMove(0, 1, 2, 3))


def test_switch_requires_edges_and_simple_graph():
    assert not is_admissible(C4, SwitchMove(0, 2, 1, 3))
    with pytest.raises(GraphError):
        is_admissible(Multigraph.from_edges(2, [(0, 1), (0, 1)]), SwitchMove(0, 1, 1, 0))


def test_every_admissible_switch_is_reversible():
    rng = np.random.default_rng(0)
    G = sample_graph(gen_family("regular", n=10, d=3), seed=4).graph
    moves = admissible_switches(G)
    assert moves
    for idx in rng.choice(len(moves), size=30, replace=False):
        mv = moves[idx]
        H = apply_switch(G, mv)
        assert H.is_simple and _degree_list(H) == _degree_list(G)
        assert is_admissible(H, mv.reverse())
        assert apply_switch(H, mv.reverse()) == G


def test_random_switch_is_reproducible():
    G = cycle(7)
    assert random_switch(G, np.random.default_rng(5)) == random_switch(G, np.random.default_rng(5))


def test_run_chain_validates_degrees():
    D = gen_family("path-heavy", n=300, f=5)
    G, accepted = run_chain(havel_hakimi(D), 25_000, np.random.default_rng(0), validate=True)
    assert G.is_simple and _degree_list(G) == list(D.degrees) and accepted > 0


def test_mcmc_two_realisations_equally_often():
    D = DegreeSequence.of([1, 1, 2, 2])
    real = realizations([1, 1, 2, 2])
    assert len(real) == 2
    counts = Counter(tuple(edge_set(sample_uniform_mcmc(D, seed=s))) for s in range(2000))
    assert set(counts) == {tuple(sorted(r)) for r in real}
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_switching_bound():
    assert switching_bound(2, 1, 10) == 5
    m, a = 1000, 10
    assert switching_bound(2 * m / 3, m ** (2 / 3) / a ** 2, 7) == pytest.approx((m ** (2 / 3) / a ** 2) / (2 * m / 3) * 7)
    with pytest.raises(ValueError):
        switching_bound(0, 1, 10)


# ---------------------------------------------------------------- sample_graph


def test_sample_graph_mode_choice_and_provenance():
    assert choose_mode(gen_family("regular", n=100, d=3)) == "reject"
    assert choose_mode(gen_family("two-stars", n=200)) == "mcmc"
    s = sample_graph(gen_family("regular", n=100, d=3), seed=9)
    prov = s.provenance()
    assert prov["mode"] == "reject" and prov["seed"] == 9 and prov["n"] == 100 and prov["m"] == 150


def test_sample_graph_is_deterministic():
    D = gen_family("three-regular-leaves", k=30)
    for mode in ("reject", "mcmc"):
        assert sample_graph(D, seed=3, mode=mode).graph == sample_graph(D, seed=3, mode=mode).graph


def test_sample_graph_bad_mode():
    with pytest.raises(ValueError):
        sample_graph(DegreeSequence.of([1, 1]), mode="magic")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=4, max_size=14), st.integers(0, 10 ** 6),
       st.sampled_from(["reject", "mcmc"]))
def test_sampled_graphs_are_simple_realisations(degs, seed, mode):
    if sum(degs) % 2:
        degs = degs + [1]
    D = DegreeSequence.of(degs)
    if not is_feasible(D):
        return
    try:
        G = sample_graph(D, seed=seed, mode=mode, max_tries=2000).graph
    except SamplerExhausted:
        return
    assert G.is_simple and _degree_list(G) == list(D.degrees)


# ---------------------------------------------------------------- cycle counts


@pytest.mark.parametrize("t", range(0, 9))
def test_cycle_union_count_matches_enumeration(t):
    assert cycle_union_count(t) == two_regular_count(t)


def test_cycle_union_count_examples():
    assert [cycle_union_count(t) for t in (0, 1, 2, 3, 4, 6)] == [1, 0, 0, 1, 3, 70]


def test_cycle_ratio_examples():
    assert cycle_ratio(3) == pytest.approx(3)
    assert cycle_ratio(5) == pytest.approx(70 / 12)
    with pytest.raises(ValueError):
        cycle_ratio(2)


def test_cycle_ratio_asymptotics():
    t = 200
    assert abs(cycle_ratio(t) / (t * (1 + 1 / (2 * t))) - 1) <= 1e-4


def test_log_counts_agree_with_exact():
    for t in (3, 10, 50, 200, 500):
        exact = cycle_union_count(t)
        assert log_cycle_union_count(t) == pytest.approx(math.log(exact), rel=1e-12)
        assert normalised_cycle_count(t) == pytest.approx(exact / math.factorial(t), rel=1e-12)
    assert log_cycle_union_count(2) == -math.inf


def test_cycle_counts_errors():
    with pytest.raises(ValueError):
        cycle_union_count(-1)
    with pytest.raises(ValueError):
        cycle_union_count(10 ** 4)


# ---------------------------------------------------------------- green lengths


def test_green_lengths_examples():
    assert sample_green_lengths(1, 5, seed=0) == [7]
    assert sample_green_lengths(3, 0, seed=0) == [2, 2, 2]
    draws = sample_green_lengths_batch(2, 1, 10_000, seed=1)
    share = float(np.mean(draws[:, 0] == 3))
    assert set(map(tuple, draws.tolist())) == {(3, 2), (2, 3)}
    assert abs(share - 0.5) <= 4 * math.sqrt(0.25 / 10_000)


def test_green_lengths_uniform_over_compositions():
    # g=3, N=3: binom(5, 2) = 10 equally likely compositions
    draws = sample_green_lengths_batch(3, 3, 20_000, seed=2)
    counts = Counter(map(tuple, draws.tolist()))
    assert len(counts) == 10
    assert chisquare(list(counts.values())).pvalue > 0.001


def test_green_lengths_errors():
    with pytest.raises(ValueError):
        sample_green_lengths(0, 3)
    with pytest.raises(ValueError):
        sample_green_lengths(2, -1)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.integers(0, 60), st.integers(0, 2 ** 31))
def test_green_lengths_sum_and_floor(g, N, seed):
    x = sample_green_lengths(g, N, seed=seed)
    assert len(x) == g and sum(x) == N + 2 * g and min(x) >= 2


def test_green_tail_examples():
    t = green_tail_bound_check(2, 1, 0, 0)
    assert (t.empirical, t.bound, t.holds) == (0.0, 0.0, True)
    t = green_tail_bound_check(2, 1, 1, 0, replicates=20_000, seed=3)
    assert t.bound == 1.0 and abs(t.empirical - 0.5) < 0.02 and t.holds
    with pytest.raises(ValueError):
        green_tail_bound_check(2, 1, 3, 0)
    with pytest.raises(ValueError):
        green_tail_bound_check(2, 0, 1, 0)
