r"""
Invariant suite: the algebra the protocol and the attack rest on.

Each check draws seeded random cases (or enumerates exhaustively where the
space is small), counts failures, and reports a Check. Nothing raises on a
failed property; the caller decides what a failure means.

    from aelab.verify import run_checks

    for check in run_checks(seed=0):
        print(check)                        # Check(braid-relations, 2100 cases, ok)

    run_checks(seed=0, thorough=True)       # acceptance-scale case counts

Checks:

    field-axioms          ring and inverse laws in GF(2), GF(5), GF(9), GF(32), GF(256)
    braid-relations       b_i b_{i+1} b_i = b_{i+1} b_i b_{i+1} and far commutation, N <= 8
    fold-vs-dense         fast E-multiplication equals step-matrix products
    homomorphism          (s * u) * v == s * (u v)
    inverse-cancellation  s * (w w^-1) == s
    braid-preimage        every permutation of S_5 lifts to a braid with that permutation
    subspace-intersect    intersection equals the enumerated set intersection over GF(2)
    poly-in-m0            Horner evaluation equals the naive power sum
    exchange-agreement    both sides of an honest exchange compute the same secret
"""

from collections.abc import Callable, Iterator
from dataclasses import dataclass
from itertools import permutations, product
from random import Random

from aelab.aedh import SharedSecret, exchange, gen_system, poly_in_m0
from aelab.braid import BraidWord, braid_preimage, permutation_of, random_word
from aelab.emult import EMultPair, TValues, braid_relation_check, emult, emult_dense
from aelab.ffield import FieldSpec, Matrix, Subspace, subspace_intersect
from aelab.perm import Permutation
from aelab.utils import debug, derive_rng

__all__ = [
    "Check",
    "CHECKS",
    "run_checks",
    "compare_secrets",
    "check_field_axioms",
    "check_braid_relations",
    "check_fold_vs_dense",
    "check_homomorphism",
    "check_inverse_cancellation",
    "check_braid_preimage",
    "check_subspace_intersect",
    "check_poly_in_m0",
    "check_exchange_agreement",
]


@dataclass(frozen=True, slots=True)
class Check:
    """Outcome of one invariant check.

    Attributes:
        name: Check name
        cases: Cases examined
        failures: Cases that violated the property
        detail: First failing case, if any
    """

    name: str
    cases: int
    failures: int = 0
    detail: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __repr__(self) -> str:
        state = "ok" if self.passed else f"{self.failures} FAILED"
        return f"Check({self.name}, {self.cases} cases, {state})"


def _tally(name: str, cases: Iterator[tuple[bool, str]]) -> Check:
    total = failures = 0
    detail = None
    for ok, label in cases:
        total += 1
        if not ok:
            failures += 1
            detail = detail or label
    debug(f"verify: {name} {total} cases, {failures} failures")
    return Check(name, total, failures, detail)


def _random_pair(gf: FieldSpec, n: int, rng: Random) -> EMultPair:
    m = Matrix(gf, [[gf.random_element(rng) for _ in range(n)] for _ in range(n)])
    return EMultPair(m, Permutation(rng.sample(range(1, n + 1), n)))


def _random_braid(n: int, rng: Random, max_len: int = 12) -> BraidWord:
    return random_word(n, rng.randint(0, max_len), range(1, n), rng)


# Field and representation


def check_field_axioms(rng: Random, cases: int = 500, orders: tuple[int, ...] = (2, 5, 9, 32, 256)) -> Check:
    def run():
        for q in orders:
            gf = FieldSpec.for_order(q)
            add, mul = gf.add, gf.mul
            for _ in range(cases):
                a, b, c = (gf.random_element(rng) for _ in range(3))
                ok = (
                    add(add(a, b), c) == add(a, add(b, c))
                    and mul(mul(a, b), c) == mul(a, mul(b, c))
                    and mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
                    and add(a, gf.neg(a)) == 0
                    and mul(a, 1) == a
                    and (a == 0 or mul(a, gf.inv(a)) == 1)
                )
                yield ok, f"{gf!r} a={a:x} b={b:x} c={c:x}"

    return _tally("field-axioms", run())


def check_braid_relations(rng: Random, tsets: int = 10, max_n: int = 8, q: int = 32) -> Check:
    gf = FieldSpec.for_order(q)

    def run():
        for n in range(3, max_n + 1):
            for _ in range(tsets):
                t = TValues.random(gf, n, rng)
                for i in range(1, n - 1):
                    yield braid_relation_check(t, i), f"n={n} i={i} t={t.values}"

    return _tally("braid-relations", run())


def check_fold_vs_dense(rng: Random, cases: int = 200, q: int = 32) -> Check:
    gf = FieldSpec.for_order(q)

    def run():
        for _ in range(cases):
            n = rng.randint(2, 8)
            t = TValues.random(gf, n, rng)
            start, w = _random_pair(gf, n, rng), _random_braid(n, rng)
            yield emult(start, w, t) == emult_dense(start, w, t), f"n={n} w={w!r}"

    return _tally("fold-vs-dense", run())


def check_homomorphism(rng: Random, cases: int = 500, q: int = 32) -> Check:
    gf = FieldSpec.for_order(q)

    def run():
        for _ in range(cases):
            n = rng.randint(2, 8)
            t = TValues.random(gf, n, rng)
            start, u, v = _random_pair(gf, n, rng), _random_braid(n, rng), _random_braid(n, rng)
            yield emult(start, u + v, t) == emult(emult(start, u, t), v, t), f"n={n} u={u!r} v={v!r}"

    return _tally("homomorphism", run())


def check_inverse_cancellation(rng: Random, cases: int = 500, q: int = 32) -> Check:
    gf = FieldSpec.for_order(q)

    def run():
        for _ in range(cases):
            n = rng.randint(2, 8)
            t = TValues.random(gf, n, rng)
            start, w = _random_pair(gf, n, rng), _random_braid(n, rng)
            yield emult(start, w + w.inverse(), t) == start, f"n={n} w={w!r}"

    return _tally("inverse-cancellation", run())


def check_braid_preimage(n: int = 5) -> Check:
    def run():
        for image in permutations(range(1, n + 1)):
            p = Permutation(image)
            yield permutation_of(braid_preimage(p)) == p, f"perm={p!r}"

    return _tally("braid-preimage", run())


# Linear algebra


def _span_set(gf: FieldSpec, basis, d: int) -> frozenset[tuple[int, ...]]:
    out = set()
    for coeffs in product(range(gf.order), repeat=len(basis)):
        v = [0] * d
        for c, b in zip(coeffs, basis):
            gf.axpy(v, c, b)
        out.add(tuple(v))
    return frozenset(out)


def _all_subspaces(gf: FieldSpec, d: int) -> list[tuple[Subspace, frozenset[tuple[int, ...]]]]:
    """Every subspace of GF(q)^d with its set of vectors, found by closing under one more vector."""
    vectors = list(product(range(gf.order), repeat=d))
    zero = frozenset({(0,) * d})
    seen = {zero: Subspace(gf, d)}
    frontier = [zero]
    while frontier:
        grown = []
        for s in frontier:
            basis = seen[s].basis
            for v in vectors:
                if v in s:
                    continue
                new = _span_set(gf, [*basis, v], d)
                if new not in seen:
                    seen[new] = Subspace(gf, d, [*basis, v])
                    grown.append(new)
        frontier = grown
    return [(seen[s], s) for s in sorted(seen, key=lambda s: (len(s), sorted(s)))]


def _basis_of(gf: FieldSpec, vectors: frozenset[tuple[int, ...]], d: int) -> tuple[tuple[int, ...], ...]:
    span = Subspace(gf, d)
    for v in sorted(vectors):
        span.insert(v)
    return span.basis


def check_subspace_intersect(
    rng: Random,
    exhaustive_dim: int = 3,
    random_dims: tuple[int, ...] = (5, 6),
    cases: int = 200,
) -> Check:
    """Exhaustive over all pairs up to exhaustive_dim, random pairs in random_dims.

    The thorough suite sweeps every ordered pair up to GF(2)^6, about eight
    million intersections.
    """
    gf = FieldSpec.for_order(2)

    def compare(u: Subspace, w: Subspace, oracle: frozenset[tuple[int, ...]]) -> tuple[bool, str]:
        got = subspace_intersect(u, w)
        # a reduced basis inside the oracle set with the right size spans all of it
        ok = gf.order**got.dim == len(oracle) and all(b in oracle for b in got.basis)
        return ok, f"d={u.ambient_dim} U={u.basis} W={w.basis}"

    def run():
        for d in range(1, exhaustive_dim + 1):
            spaces = _all_subspaces(gf, d)
            for (u, u_set), (w, w_set) in product(spaces, repeat=2):
                yield compare(u, w, u_set & w_set)
        for d in random_dims:
            for _ in range(cases):
                u_vecs = frozenset(tuple(rng.randrange(2) for _ in range(d)) for _ in range(rng.randint(0, d)))
                w_vecs = frozenset(tuple(rng.randrange(2) for _ in range(d)) for _ in range(rng.randint(0, d)))
                u_basis, w_basis = _basis_of(gf, u_vecs, d), _basis_of(gf, w_vecs, d)
                oracle = _span_set(gf, u_basis, d) & _span_set(gf, w_basis, d)
                yield compare(Subspace(gf, d, u_basis), Subspace(gf, d, w_basis), oracle)

    return _tally("subspace-intersect", run())


def check_poly_in_m0(rng: Random, cases: int = 100, q: int = 32) -> Check:
    gf = FieldSpec.for_order(q)

    def naive(coeffs, m0: Matrix) -> Matrix:
        acc = Matrix.zeros(gf, m0.n_rows)
        power = Matrix.identity(gf, m0.n_rows)
        for c in coeffs:
            acc = acc + power.scale(c)
            power = power @ m0
        return acc

    def run():
        for _ in range(cases):
            n = rng.randint(1, 8)
            m0 = Matrix(gf, [[gf.random_element(rng) for _ in range(n)] for _ in range(n)])
            coeffs = [gf.random_element(rng) for _ in range(rng.randint(1, 9))]
            yield poly_in_m0(coeffs, m0) == naive(coeffs, m0), f"n={n} coeffs={coeffs}"

    return _tally("poly-in-m0", run())


# Protocol


def check_exchange_agreement(
    rng: Random,
    cases: int = 5,
    settings: tuple[tuple[int, int], ...] = ((8, 32), (10, 256), (16, 256)),
) -> Check:
    """Fresh keys on one system per setting; every exchange must agree."""

    def run():
        for n, q in settings:
            params = gen_system(n, FieldSpec.for_order(q), 4, 4, rng)
            for _ in range(cases):
                yield exchange(params, rng).agreed, f"n={n} q={q}"

    return _tally("exchange-agreement", run())


def compare_secrets(a: SharedSecret, b: SharedSecret) -> Check:
    """Two shared-secret artifacts, one case."""
    same = a == b
    return Check("secrets-match", 1, 0 if same else 1, None if same else "shared secrets differ")


_QUICK = {
    "field-axioms": {"cases": 500},
    "braid-relations": {"tsets": 10},
    "fold-vs-dense": {"cases": 200},
    "homomorphism": {"cases": 500},
    "inverse-cancellation": {"cases": 500},
    "subspace-intersect": {"exhaustive_dim": 3, "cases": 200},
    "poly-in-m0": {"cases": 100},
    "exchange-agreement": {"cases": 5},
}

_THOROUGH = {
    "field-axioms": {"cases": 5000},
    "braid-relations": {"tsets": 100},
    "fold-vs-dense": {"cases": 2000},
    "homomorphism": {"cases": 10_000},
    "inverse-cancellation": {"cases": 10_000},
    "subspace-intersect": {"exhaustive_dim": 6, "cases": 2000},
    "poly-in-m0": {"cases": 100},
    "exchange-agreement": {"cases": 1000},
}

CHECKS: dict[str, Callable[..., Check]] = {
    "field-axioms": check_field_axioms,
    "braid-relations": check_braid_relations,
    "fold-vs-dense": check_fold_vs_dense,
    "homomorphism": check_homomorphism,
    "inverse-cancellation": check_inverse_cancellation,
    "braid-preimage": lambda rng: check_braid_preimage(),
    "subspace-intersect": check_subspace_intersect,
    "poly-in-m0": check_poly_in_m0,
    "exchange-agreement": check_exchange_agreement,
}


def run_checks(seed: int = 0, *, thorough: bool = False, only: tuple[str, ...] | None = None) -> list[Check]:
    """Run the named checks (all by default), each on its own derived stream."""
    sizes = _THOROUGH if thorough else _QUICK
    names = only if only is not None else tuple(CHECKS)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}, expected some of {sorted(CHECKS)}")
    return [CHECKS[name](derive_rng(seed, "verify", name), **sizes.get(name, {})) for name in names]
