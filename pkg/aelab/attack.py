r"""
Shared-secret recovery from public data only.

The attack never touches a private key. It factors Alice's public key as
c * (alpha', 1) * (a~, g), with c in the algebra F_q[m0], alpha' in the span V of
images of pure braids from Alice's subgroup, and (a~, g) an E-multiplication
product of her published conjugates. The same factors then rebuild the shared
secret from Bob's public key.

    from aelab.attack import AttackConfig, AttackInput, attack_run

    data = AttackInput.from_public(params.public(), pub_a, pub_b)
    result = attack_run(data, AttackConfig(seed=7))
    result.recovered                         # True on standard parameters
    result.key                               # EMultPair equal to the honest K

Stages:

    precompute   sample short words in the conjugates whose permutation has
                 small order r, raise them to the r-th power (pure), and grow
                 V from their images until fresh samples stop helping
    stage 1      find a word in the conjugates whose permutation is g
    stage 2      gamma = p a~^-1; pick an invertible c~ in C ∩ gamma V
    stage 3      alpha' = c~^-1 gamma = sum lambda_i Pi(alpha_i), then
                 beta' = sum lambda_i Pi(^h alpha_i) and
                 K = (c~ q beta', h) * word

Failures are data, not exceptions: every stage reports its reason in the
returned AttackResult. Missing public inputs are the one exception, raised
as MissingDataError before any stage starts.

V is grown as an algebra: it is seeded with the identity braid, and every new
generator is multiplied with random earlier ones. A product of pure braids is
pure, and its twisted image is the product of the twisted images, so products
are stored as recipes over earlier generators instead of as braid words.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from math import isqrt
from random import Random
from time import perf_counter

from aelab.aedh import PublicKey, SystemParams
from aelab.braid import BraidWord, ConjugateSet
from aelab.emult import EMultPair, TValues, emult, twisted_image
from aelab.ffield import FieldSpec, Matrix, Subspace, mat_mul, random_invertible_in, subspace_intersect
from aelab.perm import Permutation
from aelab.search import bfs, meet_in_the_middle
from aelab.types import Result, Status
from aelab.utils import check_positive, debug, derive_rng, random_reduced_word

__all__ = [
    "MissingDataError",
    "AttackInput",
    "PureElement",
    "PureBasis",
    "AttackConfig",
    "AttackStats",
    "Provenance",
    "AttackResult",
    "Stage",
    "algebra_of",
    "precompute_pure_basis",
    "find_word_matching_perm",
    "stage2_find_c",
    "attack_run",
]


class MissingDataError(ValueError):
    """Public data the attack needs is absent.

    Attributes:
        missing: Names of the absent items
    """

    def __init__(self, missing: Sequence[str]) -> None:
        self.missing = tuple(missing)
        super().__init__(f"missing public key data: {', '.join(self.missing)}")


class Stage(StrEnum):
    PRECOMPUTE = "precompute"
    STAGE1 = "stage1"
    STAGE2 = "stage2"
    STAGE3 = "stage3"


_REQUIRED = ("m0", "tvalues", "alice_conjugates", "pub_a", "pub_b")


@dataclass(frozen=True, slots=True)
class AttackInput:
    """Everything the attacker sees, and nothing else.

    Attributes:
        n: Strand count
        field: The field F_q
        m0: Public seed matrix
        tvalues: Public t-values
        alice_conjugates: Alice's published conjugates
        pub_a: Alice's public key (p, g)
        pub_b: Bob's public key (q, h)
        mu: E-multiplication images (Pi(w_i), sigma_i) of Alice's conjugates
    """

    n: int
    field: FieldSpec
    m0: Matrix | None
    tvalues: TValues | None
    alice_conjugates: ConjugateSet | None
    pub_a: EMultPair | None
    pub_b: EMultPair | None
    mu: tuple[EMultPair, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        missing = [name for name in _REQUIRED if getattr(self, name) is None]
        if missing:
            raise MissingDataError(missing)
        start = EMultPair.identity(self.field, self.n)
        object.__setattr__(self, "mu", tuple(emult(start, w, self.tvalues) for w in self.alice_conjugates.words))

    @classmethod
    def from_public(
        cls,
        params: SystemParams,
        pub_a: PublicKey | EMultPair | None,
        pub_b: PublicKey | EMultPair | None,
    ) -> "AttackInput":
        """Assemble from public system data and two public keys."""

        def pair(key: PublicKey | EMultPair | None) -> EMultPair | None:
            return key.pair if isinstance(key, PublicKey) else key

        return cls(
            n=params.n,
            field=params.field,
            m0=params.m0,
            tvalues=params.tvalues,
            alice_conjugates=params.alice_conjugates,
            pub_a=pair(pub_a),
            pub_b=pair(pub_b),
        )


@dataclass(frozen=True, slots=True)
class PureElement:
    """A generator of V: either a pure braid word or a product of two earlier generators.

    Attributes:
        word: Pure braid word, None for products
        index_word: Signed conjugate-index word the braid expands from
        factors: (i, j) indices of earlier generators, None for sampled words
    """

    word: BraidWord | None = None
    index_word: tuple[int, ...] = ()
    factors: tuple[int, int] | None = None


@dataclass(slots=True)
class PureBasis:
    """Generators alpha_i of V with their images Pi(alpha_i).

    span tracks coordinates over the generators in order, so
    span.coordinates(v) gives the lambda_i directly. trace records dim V
    after every growth caused by a fresh sample.
    """

    elements: list[PureElement]
    images: list[Matrix]
    span: Subspace
    trace: list[int] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.span.dim

    def braid(self, i: int) -> BraidWord:
        """The pure braid of generator i, products expanded (can be long)."""
        e = self.elements[i]
        if e.word is not None:
            return e.word
        a, b = e.factors
        return self.braid(a) + self.braid(b)

    def twisted_images(self, h: Permutation, t: TValues) -> list[Matrix]:
        """Pi(^h alpha_i) for every generator."""
        out: list[Matrix] = []
        for e in self.elements:
            if e.word is not None:
                out.append(twisted_image(e.word, h, t))
            else:
                a, b = e.factors
                out.append(mat_mul(out[a], out[b]))
        return out


@dataclass(frozen=True, slots=True)
class AttackConfig:
    """Attack tuning.

    Attributes:
        seed: Root seed, each stage draws from its own derived stream
        word_len_max: Longest conjugate word sampled during precompute
        order_cap: Largest permutation order accepted, default N
        stall_threshold: Fresh pure samples in a row that fail to grow V
        sample_budget: Total words sampled before precompute gives up
        enrich_products: Random products tried per new generator of V
        stage1_budget: State expansions allowed in stage 1
        frontier_cap: Frontier size for the bidirectional search
        max_depth: Frontier levels per bidirectional attempt
        restarts: Fresh attempts of the bidirectional search
        bfs_max_n: Use exhaustive BFS in stage 1 up to this strand count
        stage2_budget: Random combinations tried for an invertible c~
    """

    seed: int = 0
    word_len_max: int = 10
    order_cap: int | None = None
    stall_threshold: int = 25
    sample_budget: int = 100_000
    enrich_products: int = 8
    stage1_budget: int = 1_000_000
    frontier_cap: int = 5000
    max_depth: int = 40
    restarts: int = 4
    bfs_max_n: int = 6
    stage2_budget: int = 64

    def __post_init__(self) -> None:
        for name in ("word_len_max", "stall_threshold", "sample_budget", "stage1_budget", "frontier_cap"):
            check_positive(getattr(self, name), name=name)


@dataclass(slots=True)
class AttackStats:
    """Counters gathered along the way. Timings do not take part in equality."""

    samples: int = 0
    pure_samples: int = 0
    span_trace: list[int] = field(default_factory=list)
    dim_v: int = 0
    dim_c: int = 0
    dim_intersection: int = 0
    stage1_expansions: int = 0
    stage1_word_len: int = 0
    stage2_trials: int = 0
    basis_entries: int = 0
    timings: dict[str, float] = field(default_factory=dict, compare=False)


@dataclass(frozen=True, slots=True)
class Provenance:
    """The factors a recovered key was built from."""

    a_word: tuple[int, ...]
    a_tilde: Matrix
    gamma: Matrix
    c_tilde: Matrix
    alpha_prime: Matrix
    lambdas: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class AttackResult:
    """Outcome of attack_run.

    Attributes:
        outcome: "recovered", "wrong-key" (differs from a supplied honest key) or "failed"
        key: The reconstructed shared pair, None on failure
        failed_stage: Stage that stopped the attack
        reason: Short failure reason
        stats: Counters and timings
        provenance: Factors behind the key
    """

    outcome: str
    key: EMultPair | None = None
    failed_stage: Stage | None = None
    reason: str | None = None
    stats: AttackStats = field(default_factory=AttackStats)
    provenance: Provenance | None = None

    @property
    def recovered(self) -> bool:
        return self.outcome == "recovered"

    def __repr__(self) -> str:
        if self.failed_stage is not None:
            return f"AttackResult(failed at {self.failed_stage.value}: {self.reason})"
        return f"AttackResult({self.outcome}, dim V={self.stats.dim_v})"


def algebra_of(m0: Matrix) -> Subspace:
    """C = F_q[m0]: span of I, m0, m0^2, ... until a power adds nothing."""
    n = m0.n_rows
    span = Subspace(m0.field, n * n)
    power = Matrix.identity(m0.field, n)
    while span.insert(power.flatten()):
        power = mat_mul(power, m0)
    return span


def _try_insert(basis: PureBasis, element: PureElement, image: Matrix) -> bool:
    if basis.span.insert(image.flatten()):
        basis.elements.append(element)
        basis.images.append(image)
        return True
    return False


def _enrich(basis: PureBasis, new: int, rng: Random, tries: int) -> None:
    """Multiply new generators with random earlier ones until nothing grows."""
    queue = [new]
    full = basis.span.ambient_dim
    while queue and basis.dim < full:
        i = queue.pop()
        for _ in range(tries):
            j = rng.randrange(len(basis.elements))
            for a, b in ((i, j), (j, i)):
                if _try_insert(basis, PureElement(factors=(a, b)), mat_mul(basis.images[a], basis.images[b])):
                    queue.append(len(basis.elements) - 1)


def precompute_pure_basis(
    data: AttackInput,
    rng: Random,
    *,
    word_len_max: int = 10,
    order_cap: int | None = None,
    stall_threshold: int = 25,
    sample_budget: int = 100_000,
    enrich_products: int = 8,
) -> Result:
    """Grow V from images of short pure words in Alice's conjugates.

    Returns Result with the PureBasis as solution: FOUND once stall_threshold
    fresh pure samples in a row fail to grow V (or V fills the whole matrix
    space), MAX_ITER when sample_budget words are drawn first. iterations is
    the number of words drawn, evaluations the number of pure ones.
    """
    check_positive(word_len_max, name="word_len_max")
    check_positive(stall_threshold, name="stall_threshold")
    n, field_, t = data.n, data.field, data.tvalues
    conj = data.alice_conjugates
    order_cap = n if order_cap is None else order_cap
    full = n * n

    basis = PureBasis([], [], Subspace(field_, full, track=True))
    _try_insert(basis, PureElement(word=BraidWord(n)), Matrix.identity(field_, n))
    basis.trace.append(basis.dim)
    start = EMultPair.identity(field_, n)

    samples = pure = stall = 0
    while samples < sample_budget:
        samples += 1
        word = random_reduced_word(len(conj), rng.randint(1, word_len_max), rng)
        r = conj.permutation(word).order()
        if r > order_cap:
            continue
        pure += 1
        pure_word = word * r
        braid = conj.expand(pure_word)
        if _try_insert(basis, PureElement(word=braid, index_word=pure_word), emult(start, braid, t).matrix):
            stall = 0
            _enrich(basis, len(basis.elements) - 1, rng, enrich_products)
            basis.trace.append(basis.dim)
            debug(f"precompute: sample {samples} (order {r}) grew V to {basis.dim}")
        else:
            stall += 1
        if stall >= stall_threshold or basis.dim == full:
            return Result(basis, samples, pure).log("precompute: ")

    return Result(basis, samples, pure, Status.MAX_ITER, "budget").log("precompute: ")


def find_word_matching_perm(
    data: AttackInput,
    target: Permutation,
    rng: Random,
    *,
    budget: int = 1_000_000,
    frontier_cap: int = 5000,
    max_depth: int = 40,
    restarts: int = 4,
    bfs_max_n: int = 6,
) -> Result:
    """A signed conjugate-index word whose permutation is target.

    Exhaustive BFS up to bfs_max_n strands, bidirectional meet-in-the-middle
    above. Returns Result with (word, a~) where a~ is the matrix part of the
    word's E-multiplication from (I, 1).
    """
    conj = data.alice_conjugates
    labels: list[int] = []
    tables: dict[int, tuple[int, ...]] = {}
    for i, p in enumerate(conj.perms, 1):
        labels += [i, -i]
        tables[i], tables[-i] = p.table, p.inverse().table

    def moves(state: tuple[int, ...]):
        for label in labels:
            pt = tables[label]
            yield label, tuple(pt[y] for y in state)

    def back_moves(state: tuple[int, ...]):
        for label in labels:
            pt = tables[-label]
            yield label, tuple(pt[y] for y in state)

    start = Permutation.identity(data.n).table
    if data.n <= bfs_max_n:
        result = bfs(start, target.table, moves, max_iter=budget)
    else:
        result = meet_in_the_middle(
            start,
            target.table,
            moves,
            back_moves,
            rng=rng,
            frontier_cap=frontier_cap,
            max_depth=max_depth,
            max_iter=budget,
            restarts=restarts,
        )
    if not result.ok:
        return result.log("stage1: ")

    word = tuple(result.solution)
    if conj.permutation(word) != target:
        raise AssertionError("factorization does not recompose to the target")  # pragma: no cover
    a_tilde = emult(EMultPair.identity(data.field, data.n), conj.expand(word), data.tvalues).matrix
    return Result((word, a_tilde), result.iterations, result.evaluations).log("stage1: ")


def stage2_find_c(
    data: AttackInput,
    gamma: Matrix,
    v: Subspace,
    rng: Random,
    *,
    budget: int = 64,
    algebra: Subspace | None = None,
) -> Result:
    """An invertible element c~ of C ∩ gamma V.

    Returns Result with c~ as solution; iterations counts random trials and
    evaluations is dim(C ∩ gamma V). INFEASIBLE for an empty intersection,
    MAX_ITER when no invertible combination turns up within budget.
    """
    n = isqrt(v.ambient_dim)
    c_span = algebra if algebra is not None else algebra_of(data.m0)
    gamma_v = Subspace(data.field, v.ambient_dim)
    for b in v.basis:
        gamma_v.insert(mat_mul(gamma, Matrix.from_flat(data.field, b, n)).flatten())
    meet = subspace_intersect(c_span, gamma_v)
    debug(f"stage2: dim C={c_span.dim} dim gamma V={gamma_v.dim} dim meet={meet.dim}")
    if meet.dim == 0:
        return Result(None, 0, 0, Status.INFEASIBLE, "empty-intersection")
    found = random_invertible_in(meet, rng, budget)
    if not found.ok:
        return Result(None, found.iterations, meet.dim, Status.MAX_ITER, "no-invertible")
    return Result(found.solution, found.iterations, meet.dim)


def _linear_combination(field_: FieldSpec, coeffs: Sequence[int], mats: Sequence[Matrix]) -> Matrix:
    n = mats[0].n_rows
    acc = [0] * (n * n)
    for c, m in zip(coeffs, mats):
        field_.axpy(acc, c, m.flatten())
    return Matrix.from_flat(field_, acc, n)


def attack_run(
    data: AttackInput,
    config: AttackConfig | None = None,
    *,
    honest: EMultPair | None = None,
) -> AttackResult:
    """Run precompute and the three stages, returning the reconstructed key.

    With honest supplied, a key that differs from it is reported as the
    outcome "wrong-key" instead of "recovered".
    """
    config = config or AttackConfig()
    n, t = data.n, data.tvalues
    conj = data.alice_conjugates
    stats = AttackStats()

    def failed(stage: Stage, reason: str) -> AttackResult:
        debug(f"attack: failed at {stage.value}: {reason}")
        return AttackResult("failed", failed_stage=stage, reason=reason, stats=stats)

    clock = perf_counter()
    pre = precompute_pure_basis(
        data,
        derive_rng(config.seed, "precompute"),
        word_len_max=config.word_len_max,
        order_cap=config.order_cap,
        stall_threshold=config.stall_threshold,
        sample_budget=config.sample_budget,
        enrich_products=config.enrich_products,
    )
    basis: PureBasis = pre.solution
    stats.samples, stats.pure_samples = pre.iterations, pre.evaluations
    stats.span_trace = list(basis.trace)
    stats.dim_v = basis.dim
    stats.basis_entries = len(basis.images) * n * n
    stats.timings[Stage.PRECOMPUTE.value] = perf_counter() - clock
    if not pre.ok:
        return failed(Stage.PRECOMPUTE, pre.error)

    clock = perf_counter()
    s1 = find_word_matching_perm(
        data,
        data.pub_a.perm,
        derive_rng(config.seed, "stage1"),
        budget=config.stage1_budget,
        frontier_cap=config.frontier_cap,
        max_depth=config.max_depth,
        restarts=config.restarts,
        bfs_max_n=config.bfs_max_n,
    )
    stats.stage1_expansions = s1.iterations
    stats.timings[Stage.STAGE1.value] = perf_counter() - clock
    if not s1.ok:
        return failed(Stage.STAGE1, "not-in-subgroup" if s1.status == Status.INFEASIBLE else "no-factorization")
    a_word, a_tilde = s1.solution
    stats.stage1_word_len = len(a_word)
    beta = conj.expand(a_word)

    clock = perf_counter()
    gamma = emult(data.pub_a, beta.inverse(), t).matrix
    c_span = algebra_of(data.m0)
    stats.dim_c = c_span.dim
    s2 = stage2_find_c(
        data, gamma, basis.span, derive_rng(config.seed, "stage2"), budget=config.stage2_budget, algebra=c_span
    )
    stats.stage2_trials, stats.dim_intersection = s2.iterations, s2.evaluations
    stats.timings[Stage.STAGE2.value] = perf_counter() - clock
    if not s2.ok:
        return failed(Stage.STAGE2, s2.error)
    c_tilde: Matrix = s2.solution

    clock = perf_counter()
    alpha_prime = mat_mul(c_tilde.inverse(), gamma)
    lambdas = basis.span.coordinates(alpha_prime.flatten())
    if lambdas is None:
        stats.timings[Stage.STAGE3.value] = perf_counter() - clock
        return failed(Stage.STAGE3, "span-miss")
    q, h = data.pub_b.matrix, data.pub_b.perm
    beta_prime = _linear_combination(data.field, lambdas, basis.twisted_images(h, t))
    key = emult(EMultPair(mat_mul(c_tilde, mat_mul(q, beta_prime)), h), beta, t)
    stats.timings[Stage.STAGE3.value] = perf_counter() - clock

    outcome = "recovered" if honest is None or key == honest else "wrong-key"
    debug(f"attack: {outcome}, dim V={stats.dim_v}, dim C={stats.dim_c}, |word|={len(a_word)}")
    return AttackResult(
        outcome,
        key=key,
        stats=stats,
        provenance=Provenance(a_word, a_tilde, gamma, c_tilde, alpha_prime, tuple(lambdas)),
    )
