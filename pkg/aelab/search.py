r"""
Labeled frontier searches: breadth-first and bidirectional meet-in-the-middle.

Both searches walk a graph whose edges carry labels (for the attack: signed
conjugate indices acting on permutations) and return the label sequence of a
path from start to goal, which is exactly a factorization of the goal.

    from aelab.search import bfs, meet_in_the_middle

    result = bfs(identity, target, moves)
    result.solution                          # e.g. [2, -1, 3]

    result = meet_in_the_middle(identity, target, moves, back_moves, rng=rng)

How it works: bfs explores level by level, so its first hit is a shortest
word; if the queue empties the goal is proven unreachable (INFEASIBLE).
meet_in_the_middle grows one frontier forward from start and one backward
from goal, alternating levels, until a state is seen by both. Each level can
be capped at frontier_cap states by random sampling; a capped search that
runs dry or too deep restarts with fresh samples, up to `restarts` times.
Only an uncapped search that runs dry proves the goal unreachable.

Parameters:

    start, goal: hashable states
    moves(state): iterable of (label, next_state) pairs
    back_moves(state): iterable of (label, prev_state) pairs, where
        prev_state --label--> state in the forward graph

Use bfs for small groups where the whole orbit fits in memory, and
meet_in_the_middle when the depth is what hurts.
"""

from collections import deque
from collections.abc import Callable, Hashable, Iterable
from random import Random

from aelab.types import Result, Status
from aelab.utils import debug, reconstruct_path

__all__ = ["bfs", "meet_in_the_middle"]

type Moves[S] = Callable[[S], Iterable[tuple[int, S]]]


def _labels[S](parent: dict[S, S], edge: dict[S, int], current: S) -> list[int]:
    path = reconstruct_path(parent, current)
    return [edge[s] for s in path[1:]]


def bfs[S: Hashable](
    start: S,
    goal: S,
    moves: Moves[S],
    *,
    max_iter: int = 1_000_000,
) -> Result:
    """Breadth-first search, returns a shortest label sequence from start to goal."""
    parent: dict[S, S] = {}
    edge: dict[S, int] = {}
    visited: set[S] = {start}
    queue: deque[S] = deque([start])
    iterations = 0

    while queue and iterations < max_iter:
        current = queue.popleft()
        iterations += 1

        if current == goal:
            return Result(_labels(parent, edge, current), iterations, len(visited))

        for label, neighbor in moves(current):
            if neighbor not in visited:
                visited.add(neighbor)
                parent[neighbor] = current
                edge[neighbor] = label
                queue.append(neighbor)

    if iterations >= max_iter:
        return Result(None, iterations, len(visited), Status.MAX_ITER, "expansion budget exhausted")
    return Result(None, iterations, len(visited), Status.INFEASIBLE, "goal not reachable")


def _expand[S](
    frontier: list[S],
    moves: Moves[S],
    parent: dict[S, S],
    edge: dict[S, int],
    seen: set[S],
) -> list[S]:
    fresh: list[S] = []
    for state in frontier:
        for label, neighbor in moves(state):
            if neighbor not in seen:
                seen.add(neighbor)
                parent[neighbor] = state
                edge[neighbor] = label
                fresh.append(neighbor)
    return fresh


def meet_in_the_middle[S: Hashable](
    start: S,
    goal: S,
    moves: Moves[S],
    back_moves: Moves[S],
    *,
    rng: Random,
    frontier_cap: int = 5000,
    max_depth: int = 40,
    max_iter: int = 1_000_000,
    restarts: int = 4,
) -> Result:
    """Bidirectional search with capped, randomly sampled frontiers.

    Returns Result with the full label sequence start -> goal. iterations
    counts states expanded across all attempts, evaluations counts states
    discovered.
    """
    iterations = 0
    evaluations = 0

    for attempt in range(restarts + 1):
        fwd_parent: dict[S, S] = {}
        fwd_edge: dict[S, int] = {}
        bwd_parent: dict[S, S] = {}
        bwd_edge: dict[S, int] = {}
        fwd_seen: set[S] = {start}
        bwd_seen: set[S] = {goal}
        fwd: list[S] = [start]
        bwd: list[S] = [goal]
        fwd_capped = bwd_capped = False

        for depth in range(max_depth):
            meet = fwd_seen & bwd_seen
            if meet:
                m = min(meet, key=lambda s: (len(reconstruct_path(fwd_parent, s)), repr(s)))
                back = reconstruct_path(bwd_parent, m)
                back.reverse()
                labels = _labels(fwd_parent, fwd_edge, m) + [bwd_edge[s] for s in back[:-1]]
                debug(f"meet_in_the_middle: met at depth {depth} on attempt {attempt}, |word|={len(labels)}")
                return Result(labels, iterations, evaluations)

            # a side that ran dry without sampling has seen its whole orbit
            if (not fwd and not fwd_capped) or (not bwd and not bwd_capped):
                return Result(None, iterations, evaluations, Status.INFEASIBLE, "goal not reachable")
            if not fwd and not bwd:
                break
            if iterations >= max_iter:
                return Result(None, iterations, evaluations, Status.MAX_ITER, "expansion budget exhausted")

            grow_forward = bool(fwd) and (len(fwd) <= len(bwd) or not bwd)
            if grow_forward:
                iterations += len(fwd)
                fwd = _expand(fwd, moves, fwd_parent, fwd_edge, fwd_seen)
                evaluations += len(fwd)
                if len(fwd) > frontier_cap:
                    fwd = rng.sample(fwd, frontier_cap)
                    fwd_capped = True
            else:
                iterations += len(bwd)
                bwd = _expand(bwd, back_moves, bwd_parent, bwd_edge, bwd_seen)
                evaluations += len(bwd)
                if len(bwd) > frontier_cap:
                    bwd = rng.sample(bwd, frontier_cap)
                    bwd_capped = True

        debug(f"meet_in_the_middle: attempt {attempt} failed, restarting")

    return Result(None, iterations, evaluations, Status.MAX_ITER, "restarts exhausted")
