r"""
High-order permutation sets meant to starve the attack's precomputation.

The attack needs short words in Alice's conjugates whose permutation has small
order. Build every rho_i from disjoint cycles of the odd primes 3, 5, 7, ...
(as many as fit into N points), with the cycles for one prime sharing a
block of points across all rho_i but not being powers of one another. Each
rho_i then has order equal to the product of the primes. A word's restriction
to one block is an even permutation of that block and often not a full cycle,
so short words still fall to order <= N about one time in four at N = 32.

    from aelab.defense import gen_high_order_perms, order_statistics, prime_budget

    prime_budget(32).primes                 # (3, 5, 7, 11), product 1155
    rhos = gen_high_order_perms(32, 4, rng)
    stats = order_statistics(rhos, 10, 10_000, rng)
    stats.fraction_above[32]                # about 0.75

    defended = defense_conjugates(params, rhos, rng)

Prime blocks occupy the lowest points: 3 on {1, 2, 3}, 5 on {4..8}, and so on.
Points beyond the last block are fixed by every rho_i.

All 3-cycles on one 3-point block are powers of each other, so for p = 3 the
non-power condition is relaxed with a warning; for larger primes it is
enforced by rejection sampling.
"""

import warnings
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, replace
from math import exp, log, prod, sqrt
from random import Random

from aelab.aedh import Authority, SystemParams, conjugates_commute
from aelab.braid import ConjugateSet, braid_preimage, conjugate, random_word
from aelab.perm import Permutation, compose, is_power_of, order
from aelab.utils import check_positive, check_same_degree, debug, is_prime, random_reduced_word

__all__ = [
    "PrimeBudget",
    "HighOrderPermSet",
    "OrderStatistics",
    "prime_budget",
    "gen_high_order_perms",
    "word_order",
    "order_statistics",
    "default_thresholds",
    "defense_conjugates",
]


@dataclass(frozen=True, slots=True)
class PrimeBudget:
    """Primes whose cycles make up each rho_i.

    Attributes:
        n: Point count N
        primes: Ascending odd primes 3..p_max
        p_max: Largest included prime
        order_product: Product of the primes, the order of every rho_i
        literal: Whether the primes-below-p_max reading produced this budget
    """

    n: int
    primes: tuple[int, ...]
    p_max: int
    order_product: int
    literal: bool = False

    @property
    def points(self) -> int:
        """Points covered by the prime blocks."""
        return sum(self.primes)

    def blocks(self) -> dict[int, tuple[int, ...]]:
        """Prime -> its block of 1-based points, lowest points first."""
        out = {}
        start = 1
        for p in self.primes:
            out[p] = tuple(range(start, start + p))
            start += p
        return out


def prime_budget(n: int, *, literal: bool = False) -> PrimeBudget:
    """Maximal prefix of odd primes whose cycles fit into n points.

    With literal=True, p_max is instead the largest prime such that all
    primes below it, 2 included, sum to at most n. That budget can need more
    than n points (n = 32 gives 3..13, 39 points), which is warned about.
    """
    if n < 3:
        raise ValueError(f"need at least 3 points for a prime budget, got {n}")
    if literal:
        below = 0
        p_max = 2
        p = 3
        while True:
            below = sum(q for q in range(2, p) if is_prime(q))
            if below > n:
                break
            p_max = p
            p += 1
            while not is_prime(p):
                p += 1
        primes = tuple(q for q in range(3, p_max + 1) if is_prime(q))
        if sum(primes) > n:
            warnings.warn(
                f"literal prime budget for n={n} needs {sum(primes)} points",
                stacklevel=2,
            )
    else:
        picked: list[int] = []
        p = 3
        while sum(picked) + p <= n:
            picked.append(p)
            p += 2
            while not is_prime(p):
                p += 2
        primes = tuple(picked)
    if len(primes) == 1:
        warnings.warn(f"n={n} only fits one prime block, rho_i have order {primes[0]}", stacklevel=2)
    return PrimeBudget(n, primes, primes[-1], prod(primes), literal)


@dataclass(frozen=True, slots=True)
class HighOrderPermSet:
    """rho_1..rho_k and the cycles they are built from.

    Attributes:
        n: Point count
        k: Number of permutations
        rhos: The permutations
        cycles: Prime -> (c_1(p), ..., c_k(p)) as point tuples
        budget: The prime budget used
    """

    n: int
    k: int
    rhos: tuple[Permutation, ...]
    cycles: dict[int, tuple[tuple[int, ...], ...]]
    budget: PrimeBudget

    @property
    def supports(self) -> dict[int, tuple[int, ...]]:
        return self.budget.blocks()


def _random_cycle(block: Sequence[int], rng: Random) -> tuple[int, ...]:
    points = list(block)
    rng.shuffle(points)
    i = points.index(min(points))
    return tuple(points[i:] + points[:i])


def gen_high_order_perms(
    n: int,
    k: int,
    rng: Random,
    *,
    literal: bool = False,
    retries: int = 200,
) -> HighOrderPermSet:
    """Sample k permutations from same-block, mutually non-power prime cycles.

    Raises ValueError when the budget does not fit into n points or when
    rejection sampling cannot find a fresh power class within retries.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    check_positive(retries, name="retries")
    budget = prime_budget(n, literal=literal)
    if budget.points > n:
        raise ValueError(f"prime blocks need {budget.points} points but only {n} are available")

    cycles: dict[int, tuple[tuple[int, ...], ...]] = {}
    for p, block in budget.blocks().items():
        chosen: list[tuple[int, ...]] = []
        chosen_perms: list[Permutation] = []
        for i in range(k):
            for _ in range(retries):
                cycle = _random_cycle(block, rng)
                perm = Permutation.from_cycles(n, [cycle])
                if p == 3 or not any(is_power_of(perm, prev) for prev in chosen_perms):
                    break
                debug(f"gen_high_order_perms: rejected {p}-cycle for rho_{i + 1}")
            else:
                raise ValueError(f"no {p}-cycle outside the power classes of {len(chosen)} earlier ones")
            chosen.append(cycle)
            chosen_perms.append(perm)
        cycles[p] = tuple(chosen)
    if 3 in cycles:
        warnings.warn("3-cycles on one block are powers of each other; relaxed for p=3", stacklevel=2)

    rhos = tuple(Permutation.from_cycles(n, [cycles[p][i] for p in budget.primes]) for i in range(k))
    return HighOrderPermSet(n, k, rhos, cycles, budget)


def word_order(perms: Sequence[Permutation], word: Sequence[int]) -> int:
    """Order of the product of perms along a signed 1-based index word."""
    result = Permutation.identity(perms[0].n)
    for x in word:
        p = perms[abs(x) - 1]
        result = compose(result, p if x > 0 else p.inverse())
    return order(result)


def default_thresholds(n: int) -> tuple[float, ...]:
    """N and e^{sqrt(N log N)/2}."""
    return (float(n), exp(0.5 * sqrt(n * log(n))))


@dataclass(frozen=True, slots=True)
class OrderStatistics:
    """Orders of random short words.

    Attributes:
        samples: Number of words drawn
        histogram: Order -> count, ascending by order
        fraction_above: Threshold -> fraction of words with order > threshold
    """

    samples: int
    histogram: dict[int, int]
    fraction_above: dict[float, float]


def order_statistics(
    perms: HighOrderPermSet | Sequence[Permutation],
    word_len: int,
    samples: int,
    rng: Random,
    *,
    thresholds: Sequence[float] | None = None,
) -> OrderStatistics:
    """Histogram of orders of freely reduced words of length 1..word_len."""
    check_positive(word_len, name="word_len")
    check_positive(samples, name="samples")
    rhos = perms.rhos if isinstance(perms, HighOrderPermSet) else tuple(perms)
    thresholds = tuple(thresholds) if thresholds is not None else default_thresholds(rhos[0].n)
    counts: Counter[int] = Counter()
    for _ in range(samples):
        word = random_reduced_word(len(rhos), rng.randint(1, word_len), rng)
        counts[word_order(rhos, word)] += 1
    fractions = {th: sum(c for o, c in counts.items() if o > th) / samples for th in thresholds}
    return OrderStatistics(samples, dict(sorted(counts.items())), fractions)


def defense_conjugates(params: SystemParams, perm_set: HighOrderPermSet, rng: Random) -> SystemParams:
    """Replace Alice's base words with braid preimages of the rho_i, conjugated by the same z.

    Bob's base words are kept when they still commute with the new ones.
    Otherwise they are resampled in the generator band above the highest
    letter the new bases use; an empty band raises ValueError.
    """
    check_same_degree(params.n, perm_set.n, name="system and permutation set")
    auth = params.authority
    if auth is None:
        raise ValueError("defense needs the authority data (z and base words), got public parameters")
    n = params.n

    alice_bases = tuple(braid_preimage(rho) for rho in perm_set.rhos)
    alice = ConjugateSet(n, tuple(conjugate(auth.z, a) for a in alice_bases))
    bob, bob_bases = params.bob_conjugates, auth.bob_bases

    if not conjugates_commute(alice, bob, params.tvalues):
        top = max((abs(x) for a in alice_bases for x in a.letters), default=0)
        band = tuple(range(top + 2, n))
        if not band:
            raise ValueError(f"no free generator band left for Bob above letter {top} on {n} strands")
        bob_bases = tuple(random_word(n, params.base_word_len, band, rng, nonempty=True) for _ in bob_bases)
        bob = ConjugateSet(n, tuple(conjugate(auth.z, b) for b in bob_bases))
        debug(f"defense_conjugates: Bob rebuilt in band {band[0]}..{band[-1]}")

    return replace(
        params,
        alice_conjugates=alice,
        bob_conjugates=bob,
        authority=Authority(auth.z, alice_bases, bob_bases),
    )
