r"""
Evaluated colored Burau representation and E-multiplication.

E-multiplication is the right action of braid words on pairs (M, sigma) in
GL_N(F_q) x S_N. Each letter b_i^{±1} multiplies M on the right by a colored
Burau matrix whose variables are first twisted by the running permutation,
then evaluated at the public t-values, and then advances the permutation by
the transposition (i i+1).

    from aelab.emult import EMultPair, TValues, emult

    t = TValues.random(gf, 8, rng)
    start = EMultPair.identity(gf, 8)
    pub = emult(start, word, t)              # (matrix, permutation)
    emult(emult(start, u, t), v, t) == emult(start, u + v, t)

How it works: the step matrix differs from the identity only in row i, so
right-multiplying by it only touches columns i-1, i and i+1 of every row. The
fold therefore costs O(N) field operations per letter instead of a full matrix
product. The twist evaluates the formal variable t_j at tau_{sigma^-1(j)}, where
sigma is the running permutation under the right-action convention; this is
the only twist for which the fold respects the braid relations, which
braid_relation_check verifies.

Use this for:

- Public keys and shared secrets of the key agreement
- Images of pure braids and their conjugate twists in the attack
- Checking the braid relations on a given set of t-values
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from random import Random

from aelab.braid import BraidWord, permutation_of
from aelab.ffield import FieldSpec, Matrix, mat_mul
from aelab.perm import Permutation, compose
from aelab.utils import check_in_range, check_same_degree, check_same_field

__all__ = [
    "TValues",
    "EMultPair",
    "cb_step_matrix",
    "emult",
    "emult_dense",
    "twisted_image",
    "pair_product",
    "braid_relation_check",
]


@dataclass(frozen=True, slots=True)
class TValues:
    """Nonzero field elements tau_1..tau_N substituted for t_1..t_N.

    Attributes:
        field: Field the values live in
        values: Packed field elements, values[j-1] is tau_j
    """

    field: FieldSpec
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.values)
        if len(values) < 2:
            raise ValueError(f"need at least 2 t-values, got {len(values)}")
        for j, v in enumerate(values, 1):
            if not 0 < v < self.field.order:
                raise ValueError(f"t-value tau_{j} must be a nonzero element of {self.field!r}, got {v}")
        object.__setattr__(self, "values", values)

    @classmethod
    def random(cls, field: FieldSpec, n: int, rng: Random) -> "TValues":
        return cls(field, tuple(field.random_nonzero(rng) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True, slots=True)
class EMultPair:
    """An element (matrix, permutation) of GL_N(F_q) x S_N."""

    matrix: Matrix
    perm: Permutation

    def __post_init__(self) -> None:
        if not self.matrix.is_square:
            raise ValueError(f"pair matrix must be square, got {self.matrix.n_rows}x{self.matrix.n_cols}")
        check_same_degree(self.matrix.n_rows, self.perm.n, name="pair matrix and permutation")

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "EMultPair":
        return cls(Matrix.identity(field, n), Permutation.identity(n))

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field


def _check_letter(i: int, n: int) -> None:
    check_in_range(i, 1, n - 1, name="generator index")


def cb_step_matrix(i: int, sign: int, t: TValues, sigma: Permutation) -> Matrix:
    """CB(b_i^sign) with t_j evaluated at tau_{sigma^-1(j)}.

    Positive letters put (t_i, -t_i, 1) in row i at columns i-1, i, i+1,
    dropping the first entry when i = 1. Negative letters put
    (1, -t_{i+1}^-1, t_{i+1}^-1) in the same places.
    """
    n = t.n
    _check_letter(i, n)
    check_same_degree(n, sigma.n, name="t-values and permutation")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    field = t.field
    inv = sigma.inverse().table
    c = i - 1
    rows = [[1 if r == k else 0 for k in range(n)] for r in range(n)]
    row = rows[c]
    if sign > 0:
        tau = t.values[inv[c]]
        if c > 0:
            row[c - 1] = tau
        row[c] = field.neg(tau)
        row[c + 1] = 1
    else:
        tau_inv = field.inv(t.values[inv[c + 1]])
        if c > 0:
            row[c - 1] = 1
        row[c] = field.neg(tau_inv)
        row[c + 1] = tau_inv
    return Matrix(field, rows)


def _fold(
    rows: list[list[int]],
    inv: list[int],
    letters: Sequence[int],
    t: TValues,
) -> None:
    """Right-multiply rows by the step matrix of each letter, in place.

    inv is the running inverse permutation table (0-based), updated in place.
    """
    field = t.field
    tau = t.values
    add, mul, neg, div = field.add, field.mul, field.neg, field.div
    for letter in letters:
        c = abs(letter) - 1
        if letter > 0:
            tp = tau[inv[c]]
            neg_tp = neg(tp)
            for row in rows:
                x = row[c]
                if not x:
                    continue
                xt = mul(x, tp)
                if c > 0:
                    row[c - 1] = add(row[c - 1], xt)
                row[c] = mul(x, neg_tp)
                row[c + 1] = add(row[c + 1], x)
        else:
            tp = tau[inv[c + 1]]
            for row in rows:
                x = row[c]
                if not x:
                    continue
                xd = div(x, tp)
                if c > 0:
                    row[c - 1] = add(row[c - 1], x)
                row[c] = neg(xd)
                row[c + 1] = add(row[c + 1], xd)
        inv[c], inv[c + 1] = inv[c + 1], inv[c]


def emult(start: EMultPair, w: BraidWord, t: TValues) -> EMultPair:
    """(M, sigma) * w, folded letter by letter."""
    check_same_degree(start.n, w.n, name="pair and braid word")
    check_same_degree(start.n, t.n, name="pair and t-values")
    check_same_field(start.field, t.field, name="pair and t-values")
    if w.is_empty():
        return start
    rows = [list(row) for row in start.matrix.rows]
    inv = list(start.perm.inverse().table)
    _fold(rows, inv, w.letters, t)
    return EMultPair(Matrix(t.field, rows), compose(start.perm, permutation_of(w)))


def emult_dense(
    start: EMultPair,
    w: BraidWord,
    t: TValues,
    *,
    step: Callable[[int, int, TValues, Permutation], Matrix] = cb_step_matrix,
) -> EMultPair:
    """Reference E-multiplication with full step matrices and matrix products.

    Slow; used to cross-check the fold and to run variant step matrices.
    """
    check_same_degree(start.n, w.n, name="pair and braid word")
    m, sigma = start.matrix, start.perm
    for letter in w.letters:
        i = abs(letter)
        m = mat_mul(m, step(i, 1 if letter > 0 else -1, t, sigma))
        sigma = compose(sigma, Permutation.transposition(w.n, i))
    return EMultPair(m, sigma)


def twisted_image(w: BraidWord, sigma: Permutation, t: TValues) -> Matrix:
    """Pi(^sigma w): matrix part of (I, sigma) * w."""
    return emult(EMultPair(Matrix.identity(t.field, t.n), sigma), w, t).matrix


def pair_product(left: EMultPair, right: EMultPair) -> EMultPair:
    """Component-wise product in the direct product GL_N(F_q) x S_N."""
    return EMultPair(mat_mul(left.matrix, right.matrix), compose(left.perm, right.perm))


def braid_relation_check(
    t: TValues,
    i: int,
    *,
    run: Callable[[EMultPair, BraidWord, TValues], EMultPair] = emult,
) -> bool:
    """b_i b_{i+1} b_i == b_{i+1} b_i b_{i+1}, and b_i b_j == b_j b_i for |i-j| >= 2."""
    n = t.n
    check_in_range(i, 1, n - 2, name="generator index")
    start = EMultPair.identity(t.field, n)
    if run(start, BraidWord(n, (i, i + 1, i)), t) != run(start, BraidWord(n, (i + 1, i, i + 1)), t):
        return False
    for j in range(1, n):
        if abs(i - j) >= 2 and run(start, BraidWord(n, (i, j)), t) != run(start, BraidWord(n, (j, i)), t):
            return False
    return True
