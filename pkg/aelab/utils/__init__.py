"""
Utility functions for the lab.

Seeding, validation and debugging helpers used internally by every module.
Also available for custom drivers.

    from aelab.utils import debug, derive_rng, random_reduced_word
    from aelab.utils import check_positive, check_in_range
"""

from aelab.utils.helpers import (
    debug,
    derive_rng,
    derive_seed,
    is_prime,
    prime_factors,
    random_reduced_word,
    reconstruct_path,
)
from aelab.utils.validate import (
    check_in_range,
    check_non_negative,
    check_positive,
    check_same_degree,
    check_same_field,
)

__all__ = [
    "debug",
    "derive_seed",
    "derive_rng",
    "random_reduced_word",
    "reconstruct_path",
    "is_prime",
    "prime_factors",
    "check_positive",
    "check_non_negative",
    "check_in_range",
    "check_same_field",
    "check_same_degree",
]
