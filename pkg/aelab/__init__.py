"""AE Lab - Algebraic Eraser key agreement, its cryptanalysis and a defense, in pure Python."""

__version__ = "0.1.0"

from aelab.aedh import (
    Exchange,
    PrivateKey,
    PublicKey,
    SharedSecret,
    SystemParams,
    compute_public,
    compute_shared,
    exchange,
    gen_private,
    gen_system,
    poly_in_m0,
)
from aelab.attack import (
    AttackConfig,
    AttackInput,
    AttackResult,
    MissingDataError,
    attack_run,
    find_word_matching_perm,
    precompute_pure_basis,
    stage2_find_c,
)
from aelab.braid import BraidWord, ConjugateSet, braid_preimage, free_reduce, permutation_of
from aelab.defense import defense_conjugates, gen_high_order_perms, order_statistics, prime_budget
from aelab.emult import EMultPair, TValues, emult
from aelab.experiment import ExperimentConfig, ExperimentReport, run_experiment
from aelab.ffield import FieldElement, FieldSpec, Matrix, Subspace, field_arith, mat_inv, mat_mul, subspace_intersect
from aelab.perm import Permutation, compose, cycle_decompose, order
from aelab.search import bfs, meet_in_the_middle
from aelab.serialize import ArtifactError, read_artifact, write_artifact
from aelab.types import Result, Status
from aelab.verify import run_checks

__all__ = [
    "FieldSpec",
    "FieldElement",
    "Matrix",
    "Subspace",
    "field_arith",
    "mat_mul",
    "mat_inv",
    "subspace_intersect",
    "Permutation",
    "compose",
    "cycle_decompose",
    "order",
    "BraidWord",
    "ConjugateSet",
    "free_reduce",
    "permutation_of",
    "braid_preimage",
    "TValues",
    "EMultPair",
    "emult",
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
    "exchange",
    "AttackInput",
    "AttackConfig",
    "AttackResult",
    "MissingDataError",
    "precompute_pure_basis",
    "find_word_matching_perm",
    "stage2_find_c",
    "attack_run",
    "prime_budget",
    "gen_high_order_perms",
    "order_statistics",
    "defense_conjugates",
    "bfs",
    "meet_in_the_middle",
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "ArtifactError",
    "read_artifact",
    "write_artifact",
    "run_checks",
    "Result",
    "Status",
]
