r"""
Finite fields GF(p^m) and dense linear algebra over them.

Every equation in the lab lives over a small finite field: t-values, the seed
matrix, public keys, and the subspaces the attack intersects. Elements are
polynomials over GF(p) reduced modulo an irreducible polynomial, packed into a
single int (coefficient k is digit k in base p). Log/antilog tables built at
construction make multiplication a table lookup.

    from aelab.ffield import FieldSpec, Matrix, Subspace

    gf = FieldSpec.for_order(256)           # x^8 + x^4 + x^3 + x + 1
    a, b = gf.element(0x53), gf.element(0xCA)
    a * b                                   # FieldElement(GF(2^8), 0x1)

    m = Matrix(gf, [[1, 2], [3, 4]])
    m @ m.inverse() == Matrix.identity(gf, 2)

    span = Subspace(gf, 4)
    span.insert([1, 0, 0, 0])               # True, dimension grew
    span.insert([1, 0, 0, 0])               # False, already spanned

How it works: irreducibility of the reduction polynomial is checked by trial
division against every monic polynomial of degree <= m/2. A primitive element
is found by testing g^((q-1)/r) != 1 for every prime r dividing q-1, then the
exp/log tables follow from repeated multiplication by g. Addition is XOR in
characteristic 2, integer addition mod p for prime fields, and Zech logarithms
otherwise. Linear algebra is Gauss-Jordan elimination choosing the first
nonzero entry as pivot; a singular matrix is a normal outcome (None), not an
exception.

Use this for:

- Arithmetic in any GF(p^m) with q <= 2^16
- Matrix products, inverses and ranks over such fields
- Growing spans one vector at a time (with optional coordinate tracking)
- Intersecting subspaces and drawing invertible elements from them

Matrices are flattened row-major whenever they are treated as vectors, so an
N x N matrix is a vector of length N^2.
"""

from bisect import bisect_left
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import product
from math import isqrt
from random import Random

from aelab.types import Result, Status
from aelab.utils import check_positive, check_same_field, is_prime, prime_factors

__all__ = [
    "AES_REDUCTION",
    "FieldSpec",
    "FieldElement",
    "Matrix",
    "Subspace",
    "field_arith",
    "mat_mul",
    "mat_inv",
    "span_insert",
    "subspace_intersect",
    "random_invertible_in",
    "row_reduce",
    "left_kernel",
]

# x^8 + x^4 + x^3 + x + 1, coefficients low to high
AES_REDUCTION = (1, 1, 0, 1, 1, 0, 0, 0, 1)

MAX_ORDER = 1 << 16


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial b over GF(p)."""
    a = list(a)
    db = len(b) - 1
    while len(a) > db:
        c = a.pop()
        if c:
            shift = len(a) - db
            for k in range(db):
                a[shift + k] = (a[shift + k] - c * b[k]) % p
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, (*low, 1), p):
                return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m (by packed lower coefficients)."""
    for packed in range(1, p**m):
        low = _digits(packed, p, m)
        poly = (*low, 1)
        if _is_irreducible(poly, p):
            return poly
    raise ValueError(f"No irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


def _digits(value: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        value, d = divmod(value, p)
        out.append(d)
    return out


def _pack(digits: Sequence[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


class FieldSpec:
    """
    The finite field GF(p^m) with an explicit reduction polynomial.

    Elements are ints in [0, q): the packed coefficient vector of a polynomial
    of degree < m. The reduction polynomial is part of the identity of the
    field, so two specs with different reductions compare unequal.

        gf = FieldSpec(2, 5)          # smallest irreducible quintic
        gf.mul(2, 16)                 # x * x^4 = x^5 = x^2 + 1 -> 5
        gf.inv(5)
    """

    __slots__ = ("p", "m", "reduction", "order", "_kind", "_exp", "_log", "_zech", "_poly_int")

    def __init__(self, p: int, m: int = 1, reduction: Sequence[int] | None = None) -> None:
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        check_positive(m, name="degree")
        if p**m > MAX_ORDER:
            raise ValueError(f"field order {p}^{m} exceeds the supported maximum {MAX_ORDER}")

        if reduction is None:
            if (p, m) == (2, 8):
                reduction = AES_REDUCTION
            elif m == 1:
                reduction = (0, 1)
            else:
                reduction = _smallest_irreducible(p, m)
        reduction = tuple(int(c) for c in reduction)
        if len(reduction) != m + 1 or reduction[-1] != 1:
            raise ValueError(f"reduction must be a monic polynomial of degree {m}, got {list(reduction)}")
        if any(not 0 <= c < p for c in reduction):
            raise ValueError(f"reduction coefficients must lie in [0, {p}), got {list(reduction)}")
        if not _is_irreducible(reduction, p):
            raise ValueError(f"reduction polynomial {list(reduction)} is reducible over GF({p})")

        self.p = p
        self.m = m
        self.reduction = reduction
        self.order = p**m
        self._kind = "binary" if p == 2 else "prime" if m == 1 else "zech"
        self._poly_int = _pack(reduction, p) if p == 2 else 0
        self._build_tables()

    @classmethod
    def for_order(cls, q: int) -> "FieldSpec":
        """GF(q) with the default reduction polynomial for that order."""
        factors = prime_factors(q) if q > 1 else []
        if len(factors) != 1:
            raise ValueError(f"field order must be a prime power, got {q}")
        p = factors[0]
        m = 0
        while q > 1:
            q //= p
            m += 1
        return cls(p, m)

    # Construction-time arithmetic, no tables yet

    def _slow_mul(self, a: int, b: int) -> int:
        if self._kind == "binary":
            m, poly = self.m, self._poly_int
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if (a >> m) & 1:
                    a ^= poly
            return r
        p, m = self.p, self.m
        da, db = _digits(a, p, m), _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return _pack(_poly_mod(prod, self.reduction, p), p)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _slow_add(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        return _pack([(x + y) % p for x, y in zip(_digits(a, p, m), _digits(b, p, m))], p)

    def _build_tables(self) -> None:
        n = self.order - 1
        primes = prime_factors(n) if n > 1 else []
        g = next(c for c in range(1, self.order) if all(self._slow_pow(c, n // r) != 1 for r in primes))

        exp = [0] * (2 * n)
        x = 1
        for k in range(n):
            exp[k] = x
            x = self._slow_mul(x, g)
        exp[n:] = exp[:n]
        log = [-1] * self.order
        for k in range(n):
            log[exp[k]] = k
        self._exp, self._log = exp, log

        self._zech: list[int] = []
        if self._kind == "zech":
            # zech[d] = log(1 + g^d), -1 when 1 + g^d = 0
            self._zech = [log[self._slow_add(1, exp[d])] for d in range(n)]

    # Element arithmetic on packed ints

    def add(self, a: int, b: int) -> int:
        """a + b."""
        if self._kind == "binary":
            return a ^ b
        if self._kind == "prime":
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        log = self._log
        z = self._zech[(log[b] - log[a]) % (self.order - 1)]
        return 0 if z < 0 else self._exp[log[a] + z]

    def neg(self, a: int) -> int:
        """-a."""
        if self._kind == "binary" or not a:
            return a
        if self._kind == "prime":
            return self.p - a
        return self._exp[self._log[a] + (self.order - 1) // 2]

    def sub(self, a: int, b: int) -> int:
        """a - b."""
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        """a * b."""
        if not a or not b:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        """Multiplicative inverse, raises ZeroDivisionError for 0."""
        if not a:
            raise ZeroDivisionError(f"division by zero in {self!r}")
        return self._exp[(self.order - 1) - self._log[a]]

    def div(self, a: int, b: int) -> int:
        """a / b, raises ZeroDivisionError for b = 0."""
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a ** e, negative exponents allowed for nonzero a."""
        if not a:
            if e < 0:
                raise ZeroDivisionError(f"zero has no inverse in {self!r}")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    # Vector kernels, used by every matrix routine

    def axpy(self, y: list[int], c: int, x: Sequence[int]) -> None:
        """In place y += c * x."""
        if not c:
            return
        exp, log = self._exp, self._log
        lc = log[c]
        if self._kind == "binary":
            for j, xj in enumerate(x):
                if xj:
                    y[j] ^= exp[lc + log[xj]]
        else:
            add = self.add
            for j, xj in enumerate(x):
                if xj:
                    y[j] = add(y[j], exp[lc + log[xj]])

    def scale(self, x: Sequence[int], c: int) -> list[int]:
        """New vector c * x."""
        if not c:
            return [0] * len(x)
        exp, log = self._exp, self._log
        lc = log[c]
        return [exp[lc + log[xj]] if xj else 0 for xj in x]

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Inner product of two vectors."""
        acc = 0
        for a, b in zip(x, y):
            if a and b:
                acc = self.add(acc, self.mul(a, b))
        return acc

    # Elements and sampling

    def element(self, value: int) -> "FieldElement":
        """Wrap a packed int as a FieldElement."""
        return FieldElement(self, value)

    def from_coefficients(self, coefficients: Sequence[int]) -> "FieldElement":
        """Element from its coefficient vector c_0..c_{m-1}."""
        if len(coefficients) != self.m or any(not 0 <= c < self.p for c in coefficients):
            raise ValueError(f"expected {self.m} coefficients in [0, {self.p}), got {list(coefficients)}")
        return FieldElement(self, _pack(coefficients, self.p))

    def coefficients(self, value: int) -> tuple[int, ...]:
        """Coefficient vector c_0..c_{m-1} of a packed element."""
        return tuple(_digits(value, self.p, self.m))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def random_element(self, rng: Random) -> int:
        """Uniform element, zero included."""
        return rng.randrange(self.order)

    def random_nonzero(self, rng: Random) -> int:
        """Uniform element of the multiplicative group."""
        return rng.randrange(1, self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.reduction) == (other.p, other.m, other.reduction)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.reduction))

    def __reduce__(self):
        return (FieldSpec, (self.p, self.m, self.reduction))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


@dataclass(frozen=True, slots=True)
class FieldElement:
    """An element of a FieldSpec with operator support.

    Attributes:
        field: The field this element lives in
        value: Packed coefficient vector, coefficient k is base-p digit k
    """

    field: FieldSpec
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.order:
            raise ValueError(f"value {self.value} outside {self.field!r}")

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.field.coefficients(self.value)

    def _other(self, other: "FieldElement") -> int:
        check_same_field(self.field, other.field)
        return other.value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def hex(self) -> str:
        return format(self.value, "x")

    def __repr__(self) -> str:
        return f"FieldElement({self.field!r}, 0x{self.value:x})"


_FIELD_OPS = {"add": "add", "sub": "sub", "mul": "mul", "div": "div"}


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply op in {add, sub, mul, div} to two elements of the same field."""
    if op not in _FIELD_OPS:
        raise ValueError(f"op must be one of {sorted(_FIELD_OPS)}, got {op!r}")
    check_same_field(a.field, b.field)
    return FieldElement(a.field, getattr(a.field, _FIELD_OPS[op])(a.value, b.value))


class Matrix:
    """
    Dense matrix over a FieldSpec, entries stored as packed ints.

    Immutable: every operation returns a new matrix.

        gf = FieldSpec(5)
        a = Matrix(gf, [[1, 2], [3, 4]])
        a @ Matrix.identity(gf, 2) == a
        a.inverse()                    # None when singular
        a[0, 1]                        # FieldElement(GF(5), 0x2)
    """

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows: Iterable[Iterable[int]]) -> None:
        self.field = field
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in rows)
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(self.rows[0])
        q = field.order
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"ragged matrix: row {i} has {len(row)} entries, expected {width}")
            for v in row:
                if not 0 <= v < q:
                    raise ValueError(f"entry {v} in row {i} outside {field!r}")

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldSpec, n_rows: int, n_cols: int | None = None) -> "Matrix":
        return cls(field, [[0] * (n_cols or n_rows) for _ in range(n_rows)])

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, c: int) -> "Matrix":
        return cls(field, [[c if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_flat(cls, field: FieldSpec, vec: Sequence[int], n_rows: int, n_cols: int | None = None) -> "Matrix":
        """Inverse of flatten(): row-major vector back to a matrix."""
        n_cols = n_cols or n_rows
        if len(vec) != n_rows * n_cols:
            raise ValueError(f"vector of length {len(vec)} cannot be shaped {n_rows}x{n_cols}")
        return cls(field, [vec[r * n_cols : (r + 1) * n_cols] for r in range(n_rows)])

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, key: tuple[int, int]) -> FieldElement:
        r, c = key
        return FieldElement(self.field, self.rows[r][c])

    def flatten(self) -> list[int]:
        """Row-major vector of length n_rows * n_cols."""
        return [v for row in self.rows for v in row]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        check_same_field(self.field, other.field, name="matrices")
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ValueError("Dimension mismatch in matrix sum")
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.field, [self.field.scale(row, c) for row in self.rows])

    def inverse(self) -> "Matrix | None":
        """Inverse, or None when singular."""
        return mat_inv(self)

    def rank(self) -> int:
        return len(row_reduce(self.field, [list(row) for row in self.rows]))

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.n_rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.field, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.n_rows}x{self.n_cols})"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product a @ b over the shared field."""
    check_same_field(a.field, b.field, name="matrices")
    if a.n_cols != b.n_rows:
        raise ValueError(f"Dimension mismatch: {a.n_rows}x{a.n_cols} @ {b.n_rows}x{b.n_cols}")
    field = a.field
    axpy = field.axpy
    brows = b.rows
    width = b.n_cols
    out = []
    for row in a.rows:
        acc = [0] * width
        for k, aik in enumerate(row):
            if aik:
                axpy(acc, aik, brows[k])
        out.append(acc)
    return Matrix(field, out)


def row_reduce(field: FieldSpec, rows: list[list[int]], ncols: int | None = None) -> list[int]:
    """In-place reduced row echelon form on the first ncols columns.

    The pivot in each column is the first row (at or below the current one)
    with a nonzero entry. Returns the pivot columns; rows beyond their count
    are zero on the reduced columns.
    """
    if not rows:
        return []
    if ncols is None:
        ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        rows[r] = field.scale(rows[r], field.inv(rows[r][c]))
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                field.axpy(rows[i], field.neg(rows[i][c]), rows[r])
        pivots.append(c)
        r += 1
    return pivots


def mat_inv(a: Matrix) -> Matrix | None:
    """Gauss-Jordan inverse, None when a is singular."""
    if not a.is_square:
        raise ValueError(f"only square matrices have inverses, got {a.n_rows}x{a.n_cols}")
    n = a.n_rows
    aug = [list(row) + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(a.rows)]
    if len(row_reduce(a.field, aug, n)) < n:
        return None
    return Matrix(a.field, [row[n:] for row in aug])


def left_kernel(field: FieldSpec, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x : sum_k x_k * rows[k] = 0}."""
    if not rows:
        return []
    d, n = len(rows[0]), len(rows)
    aug = [list(row) + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(rows)]
    rank = len(row_reduce(field, aug, d))
    return [row[d:] for row in aug[rank:]]


class Subspace:
    """
    A subspace of GF(q)^d kept as a reduced row echelon basis.

    Grows one vector at a time. With track=True every basis row also carries
    its coordinates over the generators that made the span grow, so
    coordinates(v) can express a member as a combination of those generators.

        span = Subspace(gf, 4, track=True)
        span.insert([1, 1, 0, 0])      # True, generator 0
        span.insert([0, 1, 0, 0])      # True, generator 1
        span.coordinates([1, 0, 0, 0]) # [1, -1] over the generators
    """

    __slots__ = ("field", "ambient_dim", "_rows", "_pivots", "_coords", "_generators", "_track")

    def __init__(
        self,
        field: FieldSpec,
        ambient_dim: int,
        vectors: Iterable[Sequence[int]] = (),
        *,
        track: bool = False,
    ) -> None:
        check_positive(ambient_dim, name="ambient_dim")
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows: list[list[int]] = []
        self._pivots: list[int] = []
        self._coords: list[list[int]] = []
        self._generators = 0
        self._track = track
        for v in vectors:
            self.insert(v)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(row) for row in self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self._pivots)

    @property
    def generator_count(self) -> int:
        """Number of inserted vectors that made the span grow."""
        return self._generators

    def _reduce(self, v: Sequence[int]) -> tuple[list[int], list[tuple[int, int]]]:
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector length {len(v)} does not match ambient dimension {self.ambient_dim}")
        field = self.field
        r = list(v)
        used = []
        for idx, (row, piv) in enumerate(zip(self._rows, self._pivots)):
            c = r[piv]
            if c:
                field.axpy(r, field.neg(c), row)
                used.append((idx, c))
        return r, used

    def insert(self, v: Sequence[int]) -> bool:
        """Add v to the span. Returns True if the dimension grew."""
        field = self.field
        r, used = self._reduce(v)
        piv = next((j for j, x in enumerate(r) if x), None)
        if piv is None:
            return False

        inv = field.inv(r[piv])
        r = field.scale(r, inv)
        coord: list[int] = []
        if self._track:
            g = self._generators
            for coords in self._coords:
                coords.append(0)
            coord = [0] * (g + 1)
            coord[g] = 1
            for idx, c in used:
                field.axpy(coord, field.neg(c), self._coords[idx])
            coord = field.scale(coord, inv)

        for idx, row in enumerate(self._rows):
            c = row[piv]
            if c:
                nc = field.neg(c)
                field.axpy(row, nc, r)
                if self._track:
                    field.axpy(self._coords[idx], nc, coord)

        pos = bisect_left(self._pivots, piv)
        self._rows.insert(pos, r)
        self._pivots.insert(pos, piv)
        if self._track:
            self._coords.insert(pos, coord)
        self._generators += 1
        return True

    def __contains__(self, v: Sequence[int]) -> bool:
        r, _ = self._reduce(v)
        return not any(r)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of v over the growing generators, None if v is outside the span."""
        if not self._track:
            raise ValueError("coordinates require a Subspace built with track=True")
        r, used = self._reduce(v)
        if any(r):
            return None
        lam = [0] * self._generators
        for idx, c in used:
            self.field.axpy(lam, c, self._coords[idx])
        return lam

    def copy(self) -> "Subspace":
        twin = Subspace(self.field, self.ambient_dim, track=self._track)
        twin._rows = [list(row) for row in self._rows]
        twin._pivots = list(self._pivots)
        twin._coords = [list(c) for c in self._coords]
        twin._generators = self._generators
        return twin

    def __repr__(self) -> str:
        return f"Subspace({self.field!r}, dim={self.dim}/{self.ambient_dim})"


def span_insert(s: Subspace, v: Sequence[int]) -> bool:
    """Insert v into s; True if the span grew."""
    return s.insert(v)


def subspace_intersect(u: Subspace, w: Subspace) -> Subspace:
    """Basis of u ∩ w from the left kernel of the stacked bases.

    A kernel vector (x, y) of [u-basis; w-basis] satisfies sum x_i u_i = -sum y_j w_j,
    and the u-side combinations of a kernel basis span the intersection.
    """
    check_same_field(u.field, w.field, name="subspaces")
    if u.ambient_dim != w.ambient_dim:
        raise ValueError(f"ambient dimensions differ: {u.ambient_dim} vs {w.ambient_dim}")
    field = u.field
    result = Subspace(field, u.ambient_dim)
    if u.dim == 0 or w.dim == 0:
        return result
    ubasis = u.basis
    for x in left_kernel(field, [*ubasis, *w.basis]):
        vec = [0] * u.ambient_dim
        for xi, b in zip(x[: u.dim], ubasis):
            field.axpy(vec, xi, b)
        result.insert(vec)
    return result


def random_invertible_in(s: Subspace, rng: Random, budget: int = 64) -> Result:
    """Random basis combination that reshapes to an invertible square matrix.

    Returns Result with the Matrix on success, MAX_ITER when the budget runs
    out, INFEASIBLE for the zero subspace.
    """
    n = isqrt(s.ambient_dim)
    if n * n != s.ambient_dim:
        raise ValueError(f"ambient dimension {s.ambient_dim} is not a perfect square")
    if s.dim == 0:
        return Result(None, 0, 0, Status.INFEASIBLE, "zero subspace")
    field = s.field
    basis = s.basis
    for trial in range(1, budget + 1):
        vec = [0] * s.ambient_dim
        for b in basis:
            field.axpy(vec, field.random_element(rng), b)
        candidate = Matrix.from_flat(field, vec, n)
        if candidate.is_invertible():
            return Result(candidate, trial, trial, Status.FOUND)
    return Result(None, budget, budget, Status.MAX_ITER, "no invertible element within budget")
