"""Tests for the key agreement."""

from dataclasses import replace
from random import Random

import pytest

from aelab.aedh import (
    SystemParams,
    compute_public,
    compute_shared,
    conjugates_commute,
    exchange,
    gen_private,
    gen_system,
    poly_in_m0,
)
from aelab.braid import BraidWord, ConjugateSet, commuting_bands
from aelab.ffield import FieldSpec, Matrix, mat_mul


class TestGenSystem:
    def test_shapes(self, params8):
        assert params8.n == 8
        assert params8.m0.is_invertible()
        assert len(params8.alice_conjugates) == 4
        assert len(params8.bob_conjugates) == 4
        assert params8.z_length == 16

    def test_base_words_in_bands(self, params8):
        lower, upper = commuting_bands(8)
        auth = params8.authority
        assert all(abs(x) in lower for a in auth.alice_bases for x in a.letters)
        assert all(abs(x) in upper for b in auth.bob_bases for x in b.letters)
        assert all(not a.is_empty() for a in auth.alice_bases)

    def test_conjugates_commute(self, params8):
        assert conjugates_commute(params8.alice_conjugates, params8.bob_conjugates, params8.tvalues)

    def test_non_commuting_sets_detected(self, params8):
        clash = ConjugateSet(8, (BraidWord(8, (1,)),))
        other = ConjugateSet(8, (BraidWord(8, (2,)),))
        assert not conjugates_commute(clash, other, params8.tvalues)

    def test_deterministic(self, gf32):
        a = gen_system(6, gf32, 3, 3, Random(4))
        b = gen_system(6, gf32, 3, 3, Random(4))
        assert a == b

    def test_public_view_drops_authority(self, params8):
        public = params8.public()
        assert public.authority is None
        assert params8.authority is not None
        assert public == replace(params8, authority=None)

    def test_authority_reattaches(self, params8):
        assert params8.public().with_authority(params8.authority) == params8

    def test_foreign_authority_refused(self, params8, gf32):
        other = gen_system(8, gf32, 4, 4, Random(8)).authority
        with pytest.raises(ValueError, match="published alice conjugates"):
            params8.public().with_authority(other)

    def test_too_few_strands(self, gf32):
        with pytest.raises(ValueError, match="at least 5 strands"):
            gen_system(4, gf32, 2, 2, Random(0))

    def test_counts_positive(self, gf32):
        with pytest.raises(ValueError, match="k must be positive"):
            gen_system(8, gf32, 0, 2, Random(0))

    def test_singular_m0_rejected(self, params8, gf32):
        with pytest.raises(ValueError, match="invertible"):
            replace(params8, m0=Matrix.zeros(gf32, 8))

    def test_conjugates_side(self, params8):
        assert params8.conjugates("alice") is params8.alice_conjugates
        assert params8.conjugates("bob") is params8.bob_conjugates
        with pytest.raises(ValueError, match="side must be one of"):
            params8.conjugates("eve")


class TestPolyInM0:
    def test_constant(self, gf32):
        m0 = Matrix(gf32, [[1, 2], [3, 4]])
        assert poly_in_m0([5], m0) == Matrix.scalar(gf32, 2, 5)

    def test_against_power_sum(self, gf32, rng):
        for _ in range(20):
            n = rng.randint(1, 6)
            m0 = Matrix(gf32, [[rng.randrange(32) for _ in range(n)] for _ in range(n)])
            coeffs = [rng.randrange(32) for _ in range(rng.randint(1, 7))]
            expected = Matrix.zeros(gf32, n)
            power = Matrix.identity(gf32, n)
            for c in coeffs:
                expected = expected + power.scale(c)
                power = mat_mul(power, m0)
            assert poly_in_m0(coeffs, m0) == expected

    def test_commutes_with_m0(self, params8, rng):
        coeffs = [rng.randrange(32) for _ in range(5)]
        p = poly_in_m0(coeffs, params8.m0)
        assert mat_mul(p, params8.m0) == mat_mul(params8.m0, p)

    def test_empty(self, gf32):
        with pytest.raises(ValueError, match="nonempty"):
            poly_in_m0([], Matrix.identity(gf32, 2))


class TestKeys:
    def test_private_key(self, params8, rng):
        priv = gen_private(params8, "alice", rng, word_len=6)
        assert priv.side == "alice"
        assert len(priv.conjugate_word) == 6
        assert len(priv.poly_coeffs) == 8
        assert poly_in_m0(priv.poly_coeffs, params8.m0).is_invertible()
        assert priv.braid == params8.alice_conjugates.expand(priv.conjugate_word)
        assert priv.field == params8.field

    def test_invertible_draws_are_bounded(self, params8):
        class ZeroStream(Random):
            def randrange(self, *args, **kwargs):
                return 0

        with pytest.raises(ValueError, match="no invertible polynomial in m0 after 5 draws"):
            gen_private(params8, "alice", ZeroStream(0), retries=5)

    def test_coefficients_must_lie_in_field(self, params8, gf2, rng):
        priv = gen_private(params8, "alice", rng)
        with pytest.raises(ValueError, match=r"coefficients \[5\] are not elements of GF\(2\)"):
            replace(priv, field=gf2, poly_coeffs=(1, 5))

    def test_key_from_another_field(self, params8, gf9, rng):
        priv = replace(gen_private(params8, "alice", rng), field=gf9, poly_coeffs=(1,))
        with pytest.raises(ValueError, match="Field mismatch"):
            compute_public(params8, priv)

    def test_public_key_perm(self, params8, rng):
        priv = gen_private(params8, "bob", rng)
        pub = compute_public(params8, priv)
        assert pub.side == "bob"
        assert pub.pair.perm == params8.bob_conjugates.permutation(priv.conjugate_word)

    def test_shared_secrets_agree(self, params8, rng):
        alice = gen_private(params8, "alice", rng)
        bob = gen_private(params8, "bob", rng)
        k_a = compute_shared(params8, alice, compute_public(params8, bob))
        k_b = compute_shared(params8, bob, compute_public(params8, alice))
        assert k_a == k_b


class TestExchange:
    def test_agrees(self, exchange8):
        assert exchange8.agreed
        assert exchange8.pub_a.side == "alice"
        assert exchange8.pub_b.side == "bob"

    @pytest.mark.parametrize("n,q", [(5, 2), (6, 9), (8, 32), (10, 256)])
    def test_agreement_across_fields(self, n, q):
        rng = Random(n * q)
        params = gen_system(n, FieldSpec.for_order(q), 3, 3, rng)
        for _ in range(10):
            assert exchange(params, rng, word_len=5).agreed

    def test_poly_degree_option(self, params8, rng):
        ex = exchange(params8, rng, poly_deg=2)
        assert len(ex.alice.poly_coeffs) == 3
        assert ex.agreed


@pytest.mark.slow
class TestAgreementAtScale:
    @pytest.mark.parametrize("n,q", [(8, 32), (10, 256), (16, 256)])
    def test_thousand_exchanges(self, n, q):
        rng = Random(1000 + n)
        params = gen_system(n, FieldSpec.for_order(q), 4, 4, rng)
        assert all(exchange(params, rng).agreed for _ in range(1000))


def test_system_params_checks_sizes(params8, gf32):
    with pytest.raises(ValueError, match="strand count and m0"):
        SystemParams(
            n=7,
            field=gf32,
            m0=params8.m0,
            tvalues=params8.tvalues,
            alice_conjugates=params8.alice_conjugates,
            bob_conjugates=params8.bob_conjugates,
            z_length=16,
            base_word_len=10,
        )
