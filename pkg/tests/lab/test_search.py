"""Tests for BFS and meet-in-the-middle word searches."""

from random import Random

from aelab.perm import Permutation, compose
from aelab.search import bfs, meet_in_the_middle
from aelab.types import Status


def graph_moves(graph):
    def moves(state):
        return [(label, nxt) for label, nxt in graph.get(state, [])]

    return moves


def perm_moves(gens):
    """Right multiplication by generator i (label i) or its inverse (label -i)."""
    tables = {}
    for i, g in enumerate(gens, 1):
        tables[i], tables[-i] = g, g.inverse()

    def moves(state):
        for label, g in tables.items():
            yield label, compose(state, g)

    def back_moves(state):
        for label, g in tables.items():
            yield label, compose(state, tables[-label])

    return tables, moves, back_moves


def replay(start, labels, tables):
    for label in labels:
        start = compose(start, tables[label])
    return start


class TestBFSBasic:
    def test_direct_path(self):
        graph = {"A": [(1, "B")], "B": [(2, "C")], "C": []}
        result = bfs("A", "C", graph_moves(graph))
        assert result.status == Status.FOUND
        assert result.solution == [1, 2]

    def test_shortest_path(self):
        graph = {"A": [(1, "B"), (2, "C")], "B": [(3, "D")], "C": [(4, "E")], "E": [(5, "D")]}
        result = bfs("A", "D", graph_moves(graph))
        assert result.solution == [1, 3]

    def test_start_is_goal(self):
        result = bfs("A", "A", graph_moves({"A": [(1, "B")]}))
        assert result.ok
        assert result.solution == []

    def test_no_path(self):
        graph = {"A": [(1, "B")], "B": [], "C": [(2, "D")]}
        result = bfs("A", "D", graph_moves(graph))
        assert result.status == Status.INFEASIBLE
        assert result.solution is None

    def test_max_iter(self):
        def moves(n):
            return [(1, n + 1)]

        result = bfs(0, -1, moves, max_iter=50)
        assert result.status == Status.MAX_ITER
        assert result.iterations == 50


class TestPermutationFactorization:
    def test_bfs_factors_s4(self):
        gens = [Permutation.transposition(4, 1), Permutation([2, 3, 4, 1])]
        tables, moves, _ = perm_moves(gens)
        e = Permutation.identity(4)
        target = Permutation([4, 2, 1, 3])
        result = bfs(e, target, moves)
        assert result.ok
        assert replay(e, result.solution, tables) == target

    def test_bfs_proves_outside_subgroup(self):
        # <(1 2), (3 4)> never reaches a 3-cycle
        gens = [Permutation.transposition(4, 1), Permutation.transposition(4, 3)]
        _, moves, _ = perm_moves(gens)
        result = bfs(Permutation.identity(4), Permutation([2, 3, 1, 4]), moves)
        assert result.status == Status.INFEASIBLE

    def test_meet_in_the_middle_s8(self):
        gens = [Permutation.transposition(8, 1), Permutation([2, 3, 4, 5, 6, 7, 8, 1])]
        tables, moves, back = perm_moves(gens)
        e = Permutation.identity(8)
        target = Permutation([5, 3, 8, 1, 2, 7, 4, 6])
        result = meet_in_the_middle(e, target, moves, back, rng=Random(0), max_depth=80)
        assert result.ok
        assert replay(e, result.solution, tables) == target

    def test_meet_in_the_middle_capped(self):
        gens = [Permutation.transposition(6, 1), Permutation([2, 3, 4, 5, 6, 1])]
        tables, moves, back = perm_moves(gens)
        e = Permutation.identity(6)
        target = Permutation([6, 5, 4, 3, 2, 1])
        result = meet_in_the_middle(e, target, moves, back, rng=Random(1), frontier_cap=20, max_depth=80)
        assert result.ok
        assert replay(e, result.solution, tables) == target

    def test_meet_in_the_middle_unreachable(self):
        gens = [Permutation.transposition(5, 1), Permutation.transposition(5, 3)]
        _, moves, back = perm_moves(gens)
        result = meet_in_the_middle(Permutation.identity(5), Permutation([2, 3, 1, 4, 5]), moves, back, rng=Random(0))
        assert result.status == Status.INFEASIBLE

    def test_meet_in_the_middle_restarts_exhausted(self):
        gens = [Permutation.transposition(8, 1), Permutation([2, 3, 4, 5, 6, 7, 8, 1])]
        _, moves, back = perm_moves(gens)
        target = Permutation([8, 7, 6, 5, 4, 3, 2, 1])
        result = meet_in_the_middle(
            Permutation.identity(8), target, moves, back, rng=Random(0), frontier_cap=2, max_depth=2, restarts=1
        )
        assert result.status == Status.MAX_ITER
        assert result.error == "restarts exhausted"

    def test_meet_in_the_middle_start_is_goal(self):
        gens = [Permutation.transposition(3, 1)]
        _, moves, back = perm_moves(gens)
        e = Permutation.identity(3)
        result = meet_in_the_middle(e, e, moves, back, rng=Random(0))
        assert result.ok
        assert result.solution == []
