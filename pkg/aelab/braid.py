r"""
Braid words in the Artin generators of B_N.

A braid word is a sequence of signed letters, +i for the crossing b_i and -i
for its inverse, 1 <= i <= N-1. Words are only ever freely reduced here: no
normal forms, no word-problem solving. Everything downstream consumes braids
through their permutation and their E-multiplication image, both of which are
invariant under free reduction.

    from aelab.braid import BraidWord, commuting_bands, conjugate, free_reduce, permutation_of

    w = BraidWord(4, (1, 2, -2, 3))
    free_reduce(w).letters                 # (1, 3)
    permutation_of(w).image                # (2, 1, 4, 3)
    conjugate(z, a)                        # z a z^-1, freely reduced

    lower, upper = commuting_bands(8)      # (1, 2, 3), (5, 6, 7)

Letters from the lower band commute with letters from the upper band because
their indices differ by at least 2.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from random import Random

from aelab.perm import Permutation, compose
from aelab.utils import check_non_negative, check_same_degree

__all__ = [
    "BraidWord",
    "ConjugateSet",
    "free_reduce",
    "permutation_of",
    "conjugate",
    "commuting_bands",
    "random_word",
    "braid_preimage",
]


@dataclass(frozen=True, slots=True)
class BraidWord:
    """A word in b_1..b_{N-1} and their inverses.

    Attributes:
        n: Strand count N
        letters: Signed generator indices, +i for b_i and -i for b_i^-1
    """

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"braid group needs at least 2 strands, got {self.n}")
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if not 1 <= abs(x) <= self.n - 1:
                raise ValueError(f"letter {x} outside ±1..±{self.n - 1} for {self.n} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        check_same_degree(self.n, other.n, name="braid words")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        """Letters reversed with signs flipped."""
        return BraidWord(self.n, tuple(-x for x in reversed(self.letters)))

    def is_empty(self) -> bool:
        return not self.letters

    def __repr__(self) -> str:
        return f"BraidWord({self.n}, {list(self.letters)})"


def _reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def free_reduce(w: BraidWord) -> BraidWord:
    """Cancel adjacent b_i b_i^-1 pairs until none remain."""
    return BraidWord(w.n, _reduce_letters(w.letters))


def permutation_of(w: BraidWord) -> Permutation:
    """Product of the simple transpositions of w, in word order.

    Signs are ignored. The strand sitting at each position is tracked by
    swapping, and the permutation is read off as strand -> final position.
    """
    at = list(range(w.n))
    for x in w.letters:
        i = abs(x) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    table = [0] * w.n
    for pos, strand in enumerate(at):
        table[strand] = pos
    return Permutation._from_table(table)


def conjugate(z: BraidWord, a: BraidWord) -> BraidWord:
    """z a z^-1, freely reduced."""
    check_same_degree(z.n, a.n, name="braid words")
    return free_reduce(z + a + z.inverse())


def commuting_bands(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Generator index bands {1..n/2-1} and {n/2+1..n-1}, mutually commuting."""
    if n < 5:
        raise ValueError(f"need at least 5 strands for two commuting generator bands, got {n}")
    half = n // 2
    return tuple(range(1, half)), tuple(range(half + 1, n))


def random_word(n: int, length: int, alphabet: Iterable[int], rng: Random, *, nonempty: bool = False) -> BraidWord:
    """Uniform letters over the alphabet with uniform signs, freely reduced afterward.

    With nonempty=True, words that reduce to the identity are redrawn.
    """
    check_non_negative(length, name="length")
    letters = sorted(set(alphabet))
    if not letters:
        raise ValueError("alphabet must be nonempty")
    if nonempty and length == 0:
        raise ValueError("a nonempty word needs a positive length")
    while True:
        w = free_reduce(BraidWord(n, tuple(rng.choice(letters) * rng.choice((1, -1)) for _ in range(length))))
        if not (nonempty and w.is_empty()):
            return w


def braid_preimage(perm: Permutation) -> BraidWord:
    """A positive braid word whose permutation is perm.

    Bubble-sorts the strand-at-position table of perm back to the identity;
    the adjacent swaps, replayed in reverse, build that table from the
    identity, which is exactly what the braid word does to its strands.
    """
    at = list(perm.inverse().table)
    swaps: list[int] = []
    n = perm.n
    for end in range(n - 1, 0, -1):
        for i in range(end):
            if at[i] > at[i + 1]:
                at[i], at[i + 1] = at[i + 1], at[i]
                swaps.append(i + 1)
    return BraidWord(n, tuple(reversed(swaps)))


@dataclass(frozen=True, slots=True)
class ConjugateSet:
    """Published conjugates z a_i z^-1 together with their permutations.

    Words are addressed by 1-based index; a signed index word such as
    (2, -1, 3) stands for w_2 w_1^-1 w_3.

    Attributes:
        n: Strand count
        words: The published braid words
        perms: permutation_of(words[i]), cached
    """

    n: int
    words: tuple[BraidWord, ...]
    perms: tuple[Permutation, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        words = tuple(self.words)
        if not words:
            raise ValueError("conjugate set must contain at least one word")
        for w in words:
            check_same_degree(self.n, w.n, name="conjugate set and word")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "perms", tuple(permutation_of(w) for w in words))

    def __len__(self) -> int:
        return len(self.words)

    def _check_index_word(self, index_word: Sequence[int]) -> None:
        for x in index_word:
            if not 1 <= abs(x) <= len(self.words):
                raise ValueError(f"conjugate index {x} outside ±1..±{len(self.words)}")

    def expand(self, index_word: Sequence[int]) -> BraidWord:
        """Concatenated Artin expansion of a signed index word, freely reduced."""
        self._check_index_word(index_word)
        letters: list[int] = []
        for x in index_word:
            w = self.words[abs(x) - 1]
            letters.extend(w.letters if x > 0 else w.inverse().letters)
        return BraidWord(self.n, _reduce_letters(letters))

    def permutation(self, index_word: Sequence[int]) -> Permutation:
        """Permutation of a signed index word, from the cached perms."""
        self._check_index_word(index_word)
        result = Permutation.identity(self.n)
        for x in index_word:
            p = self.perms[abs(x) - 1]
            result = compose(result, p if x > 0 else p.inverse())
        return result
