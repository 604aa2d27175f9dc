"""
Helper functions for seeding, debugging and word sampling.

Small, stable helpers used across the lab: labeled seed derivation so every
module and trial gets its own reproducible stream, debug printing, path
reconstruction for the frontier searches, and free-group word sampling.

    from aelab.utils import debug, derive_rng, random_reduced_word

    rng = derive_rng(7, "trial", 3, "alice")
    word = random_reduced_word(4, 10, rng)   # e.g. (2, -1, -1, 3, ...)
"""

from hashlib import sha256
from os import environ
from random import Random

__all__ = [
    "debug",
    "derive_seed",
    "derive_rng",
    "random_reduced_word",
    "reconstruct_path",
    "is_prime",
    "prime_factors",
]

_DEBUG = bool(environ.get("DEBUG"))


def debug(*args, **kwargs) -> None:
    """Print only when DEBUG=1. Same signature as print()."""
    if _DEBUG:
        print(*args, **kwargs)


def derive_seed(seed: int, *labels: object) -> int:
    """Derive a 64-bit child seed from a parent seed and a label path.

    The derivation is sha256 over "seed/label/label/..." truncated to eight
    bytes, little-endian, so replays match across platforms and languages.

    Example:
        derive_seed(7, "trial", 0) != derive_seed(7, "trial", 1)
    """
    text = "/".join([str(seed), *(str(label) for label in labels)])
    return int.from_bytes(sha256(text.encode()).digest()[:8], "little")


def derive_rng(seed: int, *labels: object) -> Random:
    """Mersenne Twister stream seeded with derive_seed(seed, *labels)."""
    return Random(derive_seed(seed, *labels))


def random_reduced_word(k: int, length: int, rng: Random) -> tuple[int, ...]:
    """Random freely reduced word of exactly `length` signed letters in 1..k.

    Each letter after the first avoids the inverse of its predecessor, so the
    word never contains an adjacent cancelling pair.
    """
    word: list[int] = []
    for _ in range(length):
        while True:
            letter = rng.randint(1, k) * rng.choice((1, -1))
            if not word or word[-1] != -letter:
                break
        word.append(letter)
    return tuple(word)


def reconstruct_path[S](parent: dict[S, S], current: S) -> list[S]:
    """Reconstruct path from parent dict, used by the frontier searches."""
    path = [current]
    while current in parent:
        current = parent[current]
        path.append(current)
    path.reverse()
    return path


def is_prime(n: int) -> bool:
    """Trial-division primality, fine for the desk-scale sizes used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n in ascending order."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors
