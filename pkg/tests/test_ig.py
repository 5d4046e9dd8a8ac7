import networkx as nx
import numpy as np
import pytest

from turboweave import (
    Permutation,
    ResourceLimitError,
    SpokeVector,
    ValidationError,
    build_ig,
    dsum_bounds,
    enumerate_valid,
    girth_bfs,
    interleaver_from_spokes,
    min_solid_cycle_bruteforce,
    nonchain_girth,
    summary_distance_exact,
)
from turboweave.cubic import girth_upper_bound
from turboweave.ig import write_ig_edge_list
from turboweave.spokes import cubic_graph_from_spokes

FIG_PERM = Permutation([4, 7, 1, 5, 8, 2, 6, 0, 3])


def shift_perm(n, k):
    return Permutation([(i + k) % n for i in range(n)])


def nx_graph(ig):
    n = ig.n
    g = nx.Graph()
    for base in (0, n):
        for i in range(n):
            g.add_edge(base + i, base + (i + 1) % n)
    for i, v in enumerate(ig.perm.table):
        g.add_edge(i, n + v)
    return g


def cycle_edge_kinds(ig, cycle):
    n = ig.n
    solid = dotted = 0
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if (a < n) != (b < n):
            dotted += 1
        else:
            solid += 1
    return solid, dotted


def oracle_nonchain_girth(ig):
    best = None
    for cycle in nx.simple_cycles(nx_graph(ig)):
        solid, dotted = cycle_edge_kinds(ig, cycle)
        if dotted == 0:
            continue
        if best is None or len(cycle) < best:
            best = len(cycle)
    return best


class TestBuild:
    def test_example_interleaver_shape(self):
        ig = build_ig(FIG_PERM)
        assert ig.num_vertices == 18
        assert ig.num_edges == 27
        degree = {}
        for (ca, a), (cb, b) in list(ig.solid_edges()) + list(ig.dotted_edges()):
            degree[(ca, a)] = degree.get((ca, a), 0) + 1
            degree[(cb, b)] = degree.get((cb, b), 0) + 1
        assert set(degree.values()) == {3}
        assert len(degree) == 18

    def test_identity_dotted_edges_are_rungs(self):
        ig = build_ig(Permutation.identity(4))
        assert list(ig.dotted_edges()) == [(("u", i), ("l", i)) for i in range(4)]

    def test_dotted_edges_form_perfect_matching(self):
        ig = build_ig(FIG_PERM)
        uppers = [u for (_, u), _ in ig.dotted_edges()]
        lowers = [v for _, (_, v) in ig.dotted_edges()]
        assert sorted(uppers) == list(range(9))
        assert sorted(lowers) == list(range(9))

    def test_too_small(self):
        with pytest.raises(ValidationError):
            build_ig(Permutation.identity(2))

    def test_works_for_non_involutions(self):
        ig = build_ig(Permutation([1, 2, 3, 4, 0]))
        assert ig.num_vertices == 10


class TestNonchainGirth:
    def test_shift_by_seven(self):
        # upper 0-1, cross to lower 8, lower 8-7, cross back to upper 0
        assert nonchain_girth(build_ig(shift_perm(14, 7))) == 4

    @pytest.mark.parametrize("n", [5, 6, 8, 12])
    def test_identity(self, n):
        assert nonchain_girth(build_ig(Permutation.identity(n))) == 4

    def test_heawood_interleaver(self):
        ig = build_ig(interleaver_from_spokes(SpokeVector(14, (5, 9))))
        value = nonchain_girth(ig)
        assert value >= 6  # bounded below by the source graph's girth
        assert value == oracle_nonchain_girth(ig)

    def test_matches_cycle_oracle(self):
        rng = np.random.default_rng(17)
        for n in (5, 7, 9, 11):
            for _ in range(5):
                ig = build_ig(Permutation(rng.permutation(n)))
                assert nonchain_girth(ig) == oracle_nonchain_girth(ig)


class TestSummaryDistanceExact:
    def test_shift_by_seven(self):
        assert summary_distance_exact(build_ig(shift_perm(14, 7))) == 2

    @pytest.mark.parametrize("n", [5, 6, 8, 12])
    def test_identity(self, n):
        assert summary_distance_exact(build_ig(Permutation.identity(n))) == 2

    def test_heawood_interleaver(self):
        ig = build_ig(interleaver_from_spokes(SpokeVector(14, (5, 9))))
        value = summary_distance_exact(ig)
        assert 3 <= value <= 4
        assert value == min_solid_cycle_bruteforce(ig, limit=28)

    def test_restricted_dotted_roots_match(self):
        for vec in enumerate_valid(12, 2, simple_only=True):
            ig = build_ig(interleaver_from_spokes(vec))
            assert summary_distance_exact(ig, dotted_indices=range(2)) == (
                summary_distance_exact(ig)
            )


class TestDsumBounds:
    @pytest.mark.parametrize("girth,expected", [(6, (3, 4)), (4, (2, 2)), (17, (9, 15)), (7, (4, 5))])
    def test_values(self, girth, expected):
        assert dsum_bounds(girth) == expected

    def test_domain(self):
        with pytest.raises(ValidationError):
            dsum_bounds(3)


class TestBruteforceOracle:
    def test_identity_five(self):
        assert min_solid_cycle_bruteforce(build_ig(Permutation.identity(5))) == 2

    def test_shift_three_matches_exact(self):
        ig = build_ig(shift_perm(6, 3))
        assert min_solid_cycle_bruteforce(ig) == summary_distance_exact(ig)

    def test_example_matches_exact(self):
        ig = build_ig(FIG_PERM)
        assert min_solid_cycle_bruteforce(ig) == summary_distance_exact(ig)

    def test_size_limit(self):
        with pytest.raises(ResourceLimitError):
            min_solid_cycle_bruteforce(build_ig(Permutation.identity(14)))

    def test_dotted_count_even_and_at_least_two(self):
        rng = np.random.default_rng(23)
        for n in (6, 9):
            ig = build_ig(Permutation(rng.permutation(n)))
            for cycle in nx.simple_cycles(nx_graph(ig)):
                solid, dotted = cycle_edge_kinds(ig, cycle)
                if dotted:
                    assert dotted % 2 == 0
                    assert dotted >= 2


class TestInvariantsModerate:
    def test_spoke_population_bounds(self):
        # source-graph floor, sandwich, and size ceiling on a fast subset;
        # the full population runs in the acceptance suite
        for s in (1, 2, 3):
            for n in range(6, 21, 2):
                if n % s:
                    continue
                for vec in enumerate_valid(n, s, simple_only=True):
                    graph_girth = girth_bfs(cubic_graph_from_spokes(vec))
                    ig = build_ig(interleaver_from_spokes(vec))
                    g_ig = nonchain_girth(ig)
                    dsum = summary_distance_exact(ig)
                    lo, hi = dsum_bounds(g_ig)
                    assert g_ig >= graph_girth
                    assert lo <= dsum <= hi
                    assert g_ig <= 2 * np.log2(vec.n + 1)
                    assert girth_upper_bound(2 * vec.n) == pytest.approx(
                        2 * np.log2(vec.n + 1)
                    )

    def test_truncated_cycle_search_upper_bounds_exact(self):
        from turboweave import summary_distance_bruteforce

        rng = np.random.default_rng(29)
        for n in (6, 8, 10):
            for _ in range(5):
                p = Permutation(rng.permutation(n))
                exact = summary_distance_exact(build_ig(p))
                assert exact <= summary_distance_bruteforce(p, 4)


def test_edge_list_export(tmp_path):
    ig = build_ig(FIG_PERM)
    path = tmp_path / "ig.edges"
    write_ig_edge_list(ig, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 27
    kinds = [line.split()[2] for line in lines]
    assert kinds.count("solid") == 18
    assert kinds.count("dotted") == 9
    # dotted lines encode the permutation with lower ids offset by n
    dotted = [line.split() for line in lines if line.endswith("dotted")]
    table = {int(u): int(v) - 9 for u, v, _ in dotted}
    assert [table[i] for i in range(9)] == list(FIG_PERM.table)
