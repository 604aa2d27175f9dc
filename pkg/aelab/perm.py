r"""
Permutations of {1..N} under the right-action convention.

Points flow left to right through a product: compose(a, b) sends x to b(a(x)),
so the permutation of a braid word is the product of its transpositions in
word order.

    from aelab.perm import Permutation, compose

    s1 = Permutation.transposition(3, 1)
    s2 = Permutation.transposition(3, 2)
    compose(s1, s2).image                  # (3, 1, 2): 1->3, 2->1, 3->2

    rho = Permutation.from_cycles(8, [(1, 2, 3), (4, 5, 6, 7, 8)])
    rho.order()                            # 15
    rho.cycle_decompose()                  # [(1, 2, 3), (4, 5, 6, 7, 8)]

Points are 1-based in every public method and in serialized form. The image
table is stored 0-based internally.
"""

from collections.abc import Iterable, Sequence
from math import lcm

from aelab.utils import check_positive, check_same_degree

__all__ = [
    "Permutation",
    "compose",
    "order",
    "cycle_decompose",
    "is_power_of",
    "support",
]


class Permutation:
    """An element of S_N stored as a 0-based image table.

    Attributes:
        n: Number of points
        table: table[i] is the image of point i (0-based)
    """

    __slots__ = ("n", "table")

    def __init__(self, image: Sequence[int]) -> None:
        """Build from the 1-based image list, image[i-1] is where i maps."""
        n = len(image)
        check_positive(n, name="permutation size")
        table = tuple(int(x) - 1 for x in image)
        if sorted(table) != list(range(n)):
            raise ValueError(f"image {list(image)} is not a bijection of 1..{n}")
        self.n = n
        self.table = table

    @classmethod
    def _from_table(cls, table: Sequence[int]) -> "Permutation":
        obj = cls.__new__(cls)
        obj.n = len(table)
        obj.table = tuple(table)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        check_positive(n, name="permutation size")
        return cls._from_table(range(n))

    @classmethod
    def transposition(cls, n: int, i: int, j: int | None = None) -> "Permutation":
        """The swap of points i and j, or of i and i+1 when j is omitted."""
        j = i + 1 if j is None else j
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise ValueError(f"transposition ({i} {j}) is not valid on {n} points")
        table = list(range(n))
        table[i - 1], table[j - 1] = j - 1, i - 1
        return cls._from_table(table)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Product of disjoint cycles given as 1-based point sequences."""
        table = list(range(n))
        seen: set[int] = set()
        for cycle in cycles:
            for x in cycle:
                if not 1 <= x <= n:
                    raise ValueError(f"cycle point {x} outside 1..{n}")
                if x in seen:
                    raise ValueError(f"cycles are not disjoint at point {x}")
                seen.add(x)
            for a, b in zip(cycle, (*cycle[1:], cycle[0])):
                table[a - 1] = b - 1
        return cls._from_table(table)

    @property
    def image(self) -> tuple[int, ...]:
        """1-based image table."""
        return tuple(x + 1 for x in self.table)

    def __call__(self, point: int) -> int:
        return self.table[point - 1] + 1

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.table))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.table):
            inv[x] = i
        return Permutation._from_table(inv)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, e: int) -> "Permutation":
        base = self if e >= 0 else self.inverse()
        e = abs(e) % self.order()
        result = Permutation.identity(self.n)
        while e:
            if e & 1:
                result = compose(result, base)
            base = compose(base, base)
            e >>= 1
        return result

    def order(self) -> int:
        return order(self)

    def cycle_decompose(self) -> list[tuple[int, ...]]:
        return cycle_decompose(self)

    def support(self) -> frozenset[int]:
        return support(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        cycles = cycle_decompose(self)
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cycles) or "()"
        return f"Permutation({self.n}, {body})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply a first, then b."""
    check_same_degree(a.n, b.n, name="permutations")
    bt = b.table
    return Permutation._from_table([bt[x] for x in a.table])


def cycle_decompose(a: Permutation) -> list[tuple[int, ...]]:
    """Canonical cycles: least point first, sorted by least point, fixed points dropped."""
    seen = [False] * a.n
    cycles = []
    for start in range(a.n):
        if seen[start] or a.table[start] == start:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x + 1)
            x = a.table[x]
        cycles.append(tuple(cycle))
    return cycles


def order(a: Permutation) -> int:
    """lcm of the cycle lengths."""
    return lcm(*(len(c) for c in cycle_decompose(a)))


def support(a: Permutation) -> frozenset[int]:
    """Points moved by a."""
    return frozenset(i + 1 for i, x in enumerate(a.table) if i != x)


def is_power_of(a: Permutation, b: Permutation) -> bool:
    """True iff a == b^e for some e in 1..order(b)."""
    check_same_degree(a.n, b.n, name="permutations")
    power = b
    for _ in range(order(b)):
        if power == a:
            return True
        power = compose(power, b)
    return False
