r"""
Algebraic Eraser Diffie-Hellman key agreement.

A trusted authority publishes system data: a seed matrix m0, t-values, and two
sets of conjugates z a_i z^-1 (Alice) and z b_j z^-1 (Bob) whose base words
commute. Each user picks a private matrix in the algebra F_q[m0] and a private
braid word in their own conjugates, publishes one E-multiplication, and both
arrive at the same shared pair.

    from aelab.aedh import gen_system, gen_private, compute_public, compute_shared

    params = gen_system(8, FieldSpec.for_order(32), 4, 4, rng)
    alice = gen_private(params, "alice", rng)
    bob = gen_private(params, "bob", rng)
    pub_a, pub_b = compute_public(params, alice), compute_public(params, bob)
    compute_shared(params, alice, pub_b) == compute_shared(params, bob, pub_a)

    result = exchange(params, rng)         # all of the above in one call
    result.agreed                          # True

How it works: private matrices are polynomials in m0, so they commute. The
base words live in generator bands at least two apart, so after conjugation
by the same z the two users' braids commute too. Both facts together make
the two evaluation orders of the shared secret coincide.

The authority data (z and the unconjugated base words) is kept on the
parameters only for generation and for the defense's re-conjugation.
params.public() drops it; nothing in the attack reads it.
"""

from collections.abc import Sequence
from dataclasses import dataclass, replace
from random import Random
from typing import Literal

from aelab.braid import BraidWord, ConjugateSet, commuting_bands, conjugate, random_word
from aelab.emult import EMultPair, TValues, emult, pair_product
from aelab.ffield import FieldSpec, Matrix, mat_mul
from aelab.perm import Permutation
from aelab.utils import check_positive, check_same_degree, check_same_field, debug, random_reduced_word

__all__ = [
    "Side",
    "Authority",
    "SystemParams",
    "PrivateKey",
    "PublicKey",
    "SharedSecret",
    "Exchange",
    "gen_system",
    "poly_in_m0",
    "gen_private",
    "compute_public",
    "compute_shared",
    "conjugates_commute",
    "exchange",
]

type Side = Literal["alice", "bob"]

SIDES: tuple[Side, ...] = ("alice", "bob")
INVERTIBLE_RETRIES = 1000


@dataclass(frozen=True, slots=True)
class Authority:
    """Generation secrets of the system data.

    Attributes:
        z: The shared conjugator
        alice_bases: Unconjugated a_i
        bob_bases: Unconjugated b_j
    """

    z: BraidWord
    alice_bases: tuple[BraidWord, ...]
    bob_bases: tuple[BraidWord, ...]


@dataclass(frozen=True, slots=True)
class SystemParams:
    """Public system data, plus the authority's generation data when known.

    Attributes:
        n: Strand count N
        field: The finite field F_q
        m0: Invertible seed matrix
        tvalues: Public t-values
        alice_conjugates: Alice's published conjugates
        bob_conjugates: Bob's published conjugates
        z_length: Length z was sampled with
        base_word_len: Length the base words were sampled with
        authority: z and base words, None on the public view
    """

    n: int
    field: FieldSpec
    m0: Matrix
    tvalues: TValues
    alice_conjugates: ConjugateSet
    bob_conjugates: ConjugateSet
    z_length: int
    base_word_len: int
    authority: Authority | None = None

    def __post_init__(self) -> None:
        check_same_degree(self.n, self.m0.n_rows, name="strand count and m0")
        check_same_degree(self.n, self.tvalues.n, name="strand count and t-values")
        check_same_degree(self.n, self.alice_conjugates.n, name="strand count and alice conjugates")
        check_same_degree(self.n, self.bob_conjugates.n, name="strand count and bob conjugates")
        if not self.m0.is_invertible():
            raise ValueError("m0 must be invertible")

    def public(self) -> "SystemParams":
        """The same parameters without the authority data."""
        return replace(self, authority=None)

    def with_authority(self, authority: Authority) -> "SystemParams":
        """Reattach generation data, which must reproduce both published conjugate sets."""
        check_same_degree(self.n, authority.z.n, name="system and authority")
        for name, published, bases in (
            ("alice", self.alice_conjugates, authority.alice_bases),
            ("bob", self.bob_conjugates, authority.bob_bases),
        ):
            if published.words != tuple(conjugate(authority.z, b) for b in bases):
                raise ValueError(f"authority data does not reproduce the published {name} conjugates")
        return replace(self, authority=authority)

    def conjugates(self, side: Side) -> ConjugateSet:
        if side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {side!r}")
        return self.alice_conjugates if side == "alice" else self.bob_conjugates


@dataclass(frozen=True, slots=True)
class PrivateKey:
    """A user's secret: a polynomial in m0 and a word in their conjugates.

    Attributes:
        side: Which conjugate set the word is drawn from
        field: Field the coefficients live in
        poly_coeffs: f_0..f_d as packed field elements
        conjugate_word: Signed 1-based indices into the side's conjugates
        braid: The conjugate word expanded over Artin letters, freely reduced
    """

    side: Side
    field: FieldSpec
    poly_coeffs: tuple[int, ...]
    conjugate_word: tuple[int, ...]
    braid: BraidWord

    def __post_init__(self) -> None:
        bad = [c for c in self.poly_coeffs if not 0 <= c < self.field.order]
        if bad:
            raise ValueError(f"coefficients {bad} are not elements of GF({self.field.order})")


@dataclass(frozen=True, slots=True)
class PublicKey:
    side: Side
    pair: EMultPair


@dataclass(frozen=True, slots=True)
class SharedSecret:
    pair: EMultPair


@dataclass(frozen=True, slots=True)
class Exchange:
    """A complete honest key agreement."""

    alice: PrivateKey
    bob: PrivateKey
    pub_a: PublicKey
    pub_b: PublicKey
    secret_a: SharedSecret
    secret_b: SharedSecret

    @property
    def agreed(self) -> bool:
        return self.secret_a == self.secret_b


def _random_invertible(field: FieldSpec, n: int, rng: Random) -> Matrix:
    for _ in range(INVERTIBLE_RETRIES):
        m = Matrix(field, [[field.random_element(rng) for _ in range(n)] for _ in range(n)])
        if m.is_invertible():
            return m
    raise ValueError(f"no invertible {n}x{n} matrix in {INVERTIBLE_RETRIES} draws")


def conjugates_commute(alice: ConjugateSet, bob: ConjugateSet, t: TValues) -> bool:
    """Every published a-conjugate commutes with every b-conjugate under E-multiplication."""
    start = EMultPair.identity(t.field, t.n)
    return all(
        emult(start, a + b, t) == emult(start, b + a, t) for a in alice.words for b in bob.words
    )


def gen_system(
    n: int,
    field: FieldSpec,
    k: int,
    l: int,  # noqa: E741
    rng: Random,
    *,
    base_word_len: int = 10,
    z_len: int | None = None,
) -> SystemParams:
    """Random system data with commuting conjugate sets sharing one z.

    Args:
        n: Strand count, at least 5
        field: Field for m0 and the t-values
        k: Number of Alice's conjugates
        l: Number of Bob's conjugates
        rng: Random stream
        base_word_len: Letters sampled per base word before free reduction
        z_len: Letters sampled for z, default 2n
    """
    check_positive(k, name="k")
    check_positive(l, name="l")
    check_positive(base_word_len, name="base_word_len")
    lower, upper = commuting_bands(n)
    z_len = 2 * n if z_len is None else z_len

    m0 = _random_invertible(field, n, rng)
    tvalues = TValues.random(field, n, rng)
    alice_bases = tuple(random_word(n, base_word_len, lower, rng, nonempty=True) for _ in range(k))
    bob_bases = tuple(random_word(n, base_word_len, upper, rng, nonempty=True) for _ in range(l))
    z = random_word(n, z_len, range(1, n), rng)

    alice = ConjugateSet(n, tuple(conjugate(z, a) for a in alice_bases))
    bob = ConjugateSet(n, tuple(conjugate(z, b) for b in bob_bases))
    if not conjugates_commute(alice, bob, tvalues):
        raise AssertionError("conjugate sets from disjoint bands failed to commute")  # pragma: no cover
    debug(f"gen_system: n={n} {field!r} k={k} l={l} |z|={len(z)}")

    return SystemParams(
        n=n,
        field=field,
        m0=m0,
        tvalues=tvalues,
        alice_conjugates=alice,
        bob_conjugates=bob,
        z_length=z_len,
        base_word_len=base_word_len,
        authority=Authority(z, alice_bases, bob_bases),
    )


def poly_in_m0(coeffs: Sequence[int], m0: Matrix) -> Matrix:
    """Sum of f_i m0^i by Horner's rule."""
    if not coeffs:
        raise ValueError("coefficient list must be nonempty")
    field, n = m0.field, m0.n_rows
    acc = Matrix.scalar(field, n, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = mat_mul(acc, m0)
        if c:
            rows = [list(row) for row in acc.rows]
            for i in range(n):
                rows[i][i] = field.add(rows[i][i], c)
            acc = Matrix(field, rows)
    return acc


def gen_private(
    params: SystemParams,
    side: Side,
    rng: Random,
    *,
    word_len: int = 8,
    poly_deg: int | None = None,
    retries: int = INVERTIBLE_RETRIES,
) -> PrivateKey:
    """Random private key for one side.

    The polynomial is resampled, at most retries times, until it gives an
    invertible matrix; ValueError after that. The conjugate word is a freely
    reduced word of word_len signed indices.
    """
    check_positive(word_len, name="word_len")
    check_positive(retries, name="retries")
    conjugates = params.conjugates(side)
    field = params.field
    poly_deg = params.n - 1 if poly_deg is None else poly_deg
    for _ in range(retries):
        coeffs = tuple(field.random_element(rng) for _ in range(poly_deg + 1))
        if poly_in_m0(coeffs, params.m0).is_invertible():
            break
    else:
        raise ValueError(f"no invertible polynomial in m0 after {retries} draws")
    word = random_reduced_word(len(conjugates), word_len, rng)
    return PrivateKey(side, field, coeffs, word, conjugates.expand(word))


def compute_public(params: SystemParams, priv: PrivateKey) -> PublicKey:
    """(m, 1) * w for the key's matrix m and braid w."""
    check_same_field(priv.field, params.field, name="private key and system")
    start = EMultPair(poly_in_m0(priv.poly_coeffs, params.m0), Permutation.identity(params.n))
    return PublicKey(priv.side, emult(start, priv.braid, params.tvalues))


def compute_shared(params: SystemParams, my_priv: PrivateKey, their_pub: PublicKey) -> SharedSecret:
    """(m_mine, 1) . Pub_theirs * w_mine."""
    check_same_field(my_priv.field, params.field, name="private key and system")
    mine = EMultPair(poly_in_m0(my_priv.poly_coeffs, params.m0), Permutation.identity(params.n))
    return SharedSecret(emult(pair_product(mine, their_pub.pair), my_priv.braid, params.tvalues))


def exchange(params: SystemParams, rng: Random, *, word_len: int = 8, poly_deg: int | None = None) -> Exchange:
    """Run one honest key agreement with fresh keys for both sides."""
    alice = gen_private(params, "alice", rng, word_len=word_len, poly_deg=poly_deg)
    bob = gen_private(params, "bob", rng, word_len=word_len, poly_deg=poly_deg)
    pub_a, pub_b = compute_public(params, alice), compute_public(params, bob)
    return Exchange(
        alice=alice,
        bob=bob,
        pub_a=pub_a,
        pub_b=pub_b,
        secret_a=compute_shared(params, alice, pub_b),
        secret_b=compute_shared(params, bob, pub_a),
    )
