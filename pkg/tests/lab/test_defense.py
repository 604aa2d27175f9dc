"""Tests for high-order permutation sets."""

import warnings
from math import exp, log, sqrt
from random import Random

import pytest

from aelab.aedh import conjugates_commute, exchange, gen_system
from aelab.braid import braid_preimage, conjugate, permutation_of, random_word
from aelab.defense import (
    default_thresholds,
    defense_conjugates,
    gen_high_order_perms,
    order_statistics,
    prime_budget,
    word_order,
)
from aelab.perm import Permutation, compose, is_power_of, order


def quiet_perms(n, k, rng, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return gen_high_order_perms(n, k, rng, **kwargs)


class TestPrimeBudget:
    @pytest.mark.parametrize(
        "n,primes,product",
        [(8, (3, 5), 15), (16, (3, 5, 7), 105), (32, (3, 5, 7, 11), 1155), (60, (3, 5, 7, 11, 13, 17), 255255)],
    )
    def test_fitting_budget(self, n, primes, product):
        budget = prime_budget(n)
        assert budget.primes == primes
        assert budget.order_product == product
        assert budget.p_max == primes[-1]
        assert budget.points <= n

    def test_blocks_are_consecutive(self):
        blocks = prime_budget(16).blocks()
        assert blocks == {3: (1, 2, 3), 5: (4, 5, 6, 7, 8), 7: (9, 10, 11, 12, 13, 14, 15)}

    def test_literal_reading_overflows(self):
        with pytest.warns(UserWarning, match="needs 39 points"):
            budget = prime_budget(32, literal=True)
        assert budget.primes == (3, 5, 7, 11, 13)
        assert budget.literal

    def test_single_prime_warns(self):
        with pytest.warns(UserWarning, match="only fits one prime block"):
            budget = prime_budget(5)
        assert budget.order_product == 3

    def test_too_small(self):
        with pytest.raises(ValueError, match="at least 3 points"):
            prime_budget(2)


class TestGenHighOrderPerms:
    def test_relaxation_warning(self):
        with pytest.warns(UserWarning, match="relaxed for p=3"):
            gen_high_order_perms(16, 4, Random(0))

    @pytest.mark.parametrize("n", [8, 16, 32])
    def test_every_rho_has_full_order(self, n):
        perms = quiet_perms(n, 4, Random(n))
        for rho in perms.rhos:
            assert order(rho) == perms.budget.order_product

    def test_cycles_share_blocks(self):
        perms = quiet_perms(32, 4, Random(1))
        for p, block in perms.supports.items():
            for cycle in perms.cycles[p]:
                assert len(cycle) == p
                assert set(cycle) == set(block)

    def test_large_prime_cycles_are_not_powers(self):
        perms = quiet_perms(32, 4, Random(2))
        for p, cycles in perms.cycles.items():
            if p < 5:
                continue
            cs = [Permutation.from_cycles(32, [c]) for c in cycles]
            for i, a in enumerate(cs):
                for b in cs[:i]:
                    assert not is_power_of(a, b)

    def test_points_past_blocks_fixed(self):
        perms = quiet_perms(30, 3, Random(3))
        for rho in perms.rhos:
            assert all(rho(x) == x for x in range(27, 31))

    def test_bad_arguments(self):
        with pytest.raises(ValueError, match="at least 2"):
            gen_high_order_perms(16, 1, Random(0))
        with pytest.raises(ValueError, match="only 32 are available"):
            quiet_perms(32, 4, Random(0), literal=True)

    def test_power_classes_exhausted(self):
        # a 5-cycle has 4 powers, so 24 five-cycles split into 6 classes
        with pytest.raises(ValueError, match="5-cycle outside the power classes"):
            quiet_perms(8, 7, Random(0))


class TestOrderStatistics:
    def test_word_order(self):
        a = Permutation([2, 3, 1, 4])
        b = Permutation.transposition(4, 3)
        assert word_order([a, b], [1]) == 3
        assert word_order([a, b], [1, 2]) == 4
        assert word_order([a, b], [1, -1]) == 1

    def test_default_thresholds(self):
        n_th, exp_th = default_thresholds(32)
        assert n_th == 32.0
        assert exp_th == pytest.approx(exp(0.5 * sqrt(32 * log(32))))

    def test_histogram_totals(self, rng):
        perms = quiet_perms(16, 4, rng)
        stats = order_statistics(perms, 6, 500, rng)
        assert stats.samples == 500
        assert sum(stats.histogram.values()) == 500
        assert list(stats.histogram) == sorted(stats.histogram)
        assert set(stats.fraction_above) == set(default_thresholds(16))

    def test_custom_thresholds(self, rng):
        perms = quiet_perms(16, 4, rng)
        stats = order_statistics(perms.rhos, 4, 200, rng, thresholds=(0, 10**9))
        assert stats.fraction_above[0] == 1.0
        assert stats.fraction_above[10**9] == 0.0

    def test_random_perms_have_low_orders(self):
        rng = Random(5)
        rhos = [Permutation(rng.sample(range(1, 9), 8)) for _ in range(4)]
        stats = order_statistics(rhos, 10, 2000, rng)
        assert stats.fraction_above[8.0] < 0.9

    def test_defended_orders_at_n32(self):
        # about three words in four exceed N; the rest sit at orders like 12, 15, 24, 30
        rng = Random(6)
        stats = order_statistics(quiet_perms(32, 4, rng), 10, 1000, rng)
        assert 0.7 < stats.fraction_above[32.0] < 0.85
        assert stats.histogram[1155] > 0
        assert any(o <= 32 for o in stats.histogram)

    def test_conjugation_preserves_orders(self):
        rng = Random(16)
        perm_set = quiet_perms(16, 3, rng)
        z = random_word(16, 32, range(1, 16), rng)
        published = [permutation_of(conjugate(z, braid_preimage(rho))) for rho in perm_set.rhos]
        before = order_statistics(perm_set, 10, 500, Random(17))
        after = order_statistics(published, 10, 500, Random(17))
        assert after.histogram == before.histogram
        assert after.fraction_above == before.fraction_above


@pytest.fixture(scope="module")
def params20(gf32):
    return gen_system(20, gf32, 4, 4, Random(20))


class TestDefenseConjugates:
    def test_alice_bases_realize_rhos(self, params20):
        perms = quiet_perms(20, 4, Random(1))
        defended = defense_conjugates(params20, perms, Random(2))
        for base, rho in zip(defended.authority.alice_bases, perms.rhos):
            assert permutation_of(base) == rho
        assert defended.authority.z == params20.authority.z
        assert defended.m0 == params20.m0

    def test_published_perms_are_conjugated_rhos(self, params20):
        perms = quiet_perms(20, 4, Random(1))
        defended = defense_conjugates(params20, perms, Random(2))
        sz = permutation_of(params20.authority.z)
        for word, rho in zip(defended.alice_conjugates.words, perms.rhos, strict=True):
            assert permutation_of(word) == compose(compose(sz, rho), sz.inverse())
            assert order(permutation_of(word)) == perms.budget.order_product

    def test_sets_still_commute(self, params20):
        defended = defense_conjugates(params20, quiet_perms(20, 4, Random(3)), Random(4))
        assert conjugates_commute(defended.alice_conjugates, defended.bob_conjugates, defended.tvalues)
        top = max(abs(x) for a in defended.authority.alice_bases for x in a.letters)
        assert all(abs(x) > top + 1 for b in defended.authority.bob_bases for x in b.letters)

    def test_exchange_agrees(self, params20):
        defended = defense_conjugates(params20, quiet_perms(20, 4, Random(5)), Random(6))
        assert exchange(defended, Random(7), word_len=4).agreed

    def test_needs_authority(self, params20):
        with pytest.raises(ValueError, match="authority data"):
            defense_conjugates(params20.public(), quiet_perms(20, 4, Random(0)), Random(0))

    def test_strand_count_mismatch(self, params20):
        with pytest.raises(ValueError):
            defense_conjugates(params20, quiet_perms(16, 4, Random(0)), Random(0))

    def test_no_room_for_bob(self, params8):
        # the 3- and 5-blocks cover all 8 points, leaving no band above them
        with pytest.raises(ValueError, match="no free generator band"):
            defense_conjugates(params8, quiet_perms(8, 4, Random(0)), Random(0))


@pytest.mark.slow
def test_defended_orders_at_scale():
    rng = Random(32)
    stats = order_statistics(quiet_perms(32, 4, rng), 10, 10_000, rng)
    # well short of 99%: block components land in A_3 x A_5 x A_7 x A_11 and are often not full cycles
    assert 0.7 < stats.fraction_above[32.0] < 0.85
