import itertools

import pytest

from exactkit.errors import InputError, ValidationError
from exactkit.modules import (
    CategoryConfig,
    canonical_module,
    compose,
    hom_basis,
    identity_morphism,
    indecomposable,
    jordan_type,
    morphism_from_coords,
    random_automorphism,
    zero_module,
    zero_morphism,
)
from exactkit.prng import Xorshift64Star
from exactkit.ses import (
    SesMorphism,
    baer_sum,
    compose_ses_morphisms,
    direct_sum_ses,
    factor_ses_morphism,
    identity_ses_morphism,
    is_split,
    make_ses,
    pullback_ses,
    pushout_ses,
    split_ses,
    yoneda_equivalent,
)


def socle_sequence(cfg):
    """0 -> M_1 -> M_2 -> M_1 -> 0, the basic nonsplit sequence."""
    m1, m2 = indecomposable(cfg, 1), indecomposable(cfg, 2)
    socle = next(f for f in hom_basis(m1, m2) if not f.is_zero())
    quot = next(f for f in hom_basis(m2, m1) if f.is_epi())
    return make_ses(m1, socle, m2, quot, m1)


def enumerate_sequences(cfg, i, j, max_part=None):
    """All sequences 0 -> M_j -> B -> M_i -> 0 over canonical middles."""
    from exactkit.subfunctors import partitions_upto

    c = indecomposable(cfg, i)
    a = indecomposable(cfg, j)
    out = []
    for part in partitions_upto(i + j, max_part or cfg.N):
        if sum(part) != i + j:
            continue
        b = canonical_module(cfg, part)
        hb_in = hom_basis(a, b)
        hb_out = hom_basis(b, c)
        for ci in itertools.product(range(cfg.p), repeat=len(hb_in)):
            iota = morphism_from_coords(a, b, hb_in, ci)
            if not iota.is_mono():
                continue
            for co in itertools.product(range(cfg.p), repeat=len(hb_out)):
                pi = morphism_from_coords(b, c, hb_out, co)
                if not pi.is_epi():
                    continue
                try:
                    out.append(make_ses(a, iota, b, pi, c))
                except ValidationError:
                    continue
    return out


class TestMakeSes:
    def test_identity_sequence(self):
        cfg = CategoryConfig(2, 2)
        a = indecomposable(cfg, 2)
        z = zero_module(cfg)
        seq = make_ses(a, identity_morphism(a), a, zero_morphism(a, z), z)
        assert seq.b == a

    def test_split_data_validates(self):
        cfg = CategoryConfig(2, 2)
        seq = split_ses(indecomposable(cfg, 1), indecomposable(cfg, 2))
        assert seq.b.dim == 3

    def test_error_names_failed_condition(self):
        cfg = CategoryConfig(2, 2)
        m1, m2 = indecomposable(cfg, 1), indecomposable(cfg, 2)
        z = zero_morphism(m1, m2)
        quot = next(f for f in hom_basis(m2, m1) if f.is_epi())
        with pytest.raises(ValidationError, match="i not mono"):
            make_ses(m1, z, m2, quot, m1)

    def test_error_on_broken_exactness(self):
        cfg = CategoryConfig(2, 2)
        m2 = indecomposable(cfg, 2)
        ident = identity_morphism(m2)
        with pytest.raises(ValidationError):
            make_ses(m2, ident, m2, ident, m2)


class TestSplit:
    def test_zero_quotient(self):
        cfg = CategoryConfig(2, 2)
        a = indecomposable(cfg, 2)
        seq = split_ses(zero_module(cfg), a)
        assert seq.b == a and seq.c.dim == 0

    def test_block_type(self):
        cfg = CategoryConfig(2, 2)
        seq = split_ses(indecomposable(cfg, 2), indecomposable(cfg, 1))
        assert jordan_type(seq.b) == (2, 1)

    def test_is_split_detects(self):
        cfg = CategoryConfig(2, 2)
        assert is_split(split_ses(indecomposable(cfg, 1), indecomposable(cfg, 1)))
        assert not is_split(socle_sequence(cfg))


class TestYoneda:
    def test_reflexive(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        g = yoneda_equivalent(e, e)
        assert g is not None and g.is_iso()

    def test_swapped_coordinates(self):
        cfg = CategoryConfig(2, 2)
        m1 = indecomposable(cfg, 1)
        e = split_ses(m1, m1)
        swapped = make_ses(
            m1,
            # include a as the second coordinate instead of the first
            morphism_from_coords(m1, e.b, hom_basis(m1, e.b), (0, 1)),
            e.b,
            morphism_from_coords(e.b, m1, hom_basis(e.b, m1), (1, 0)),
            m1)
        g = yoneda_equivalent(e, swapped)
        assert g is not None

    def test_nonsplit_vs_split_absent(self):
        cfg = CategoryConfig(2, 2)
        m1 = indecomposable(cfg, 1)
        e = socle_sequence(cfg)
        assert jordan_type(e.b) != jordan_type(split_ses(m1, m1).b)
        assert yoneda_equivalent(e, split_ses(m1, m1)) is None

    def test_mismatched_ends_rejected(self):
        cfg = CategoryConfig(2, 2)
        m1, m2 = indecomposable(cfg, 1), indecomposable(cfg, 2)
        with pytest.raises(InputError):
            yoneda_equivalent(split_ses(m1, m1), split_ses(m1, m2))

    def test_equivalence_relation_on_enumerated_instances(self):
        cfg = CategoryConfig(2, 2)
        seqs = enumerate_sequences(cfg, 1, 1)
        assert seqs
        for e in seqs:
            assert yoneda_equivalent(e, e) is not None
        for e1 in seqs:
            for e2 in seqs:
                g12 = yoneda_equivalent(e1, e2)
                g21 = yoneda_equivalent(e2, e1)
                assert (g12 is None) == (g21 is None)
                if g12 is not None:
                    # inverse witnesses compose to an automorphism fixing ends
                    comp = compose(g21, g12)
                    assert (comp.mat * e1.i.mat) == e1.i.mat
        reps = []
        for e in seqs:
            if not any(yoneda_equivalent(e, r) is not None for r in reps):
                reps.append(e)
        # F_2 with one basis class: exactly split and nonsplit
        assert len(reps) == 2

    def test_five_lemma_iso_witness(self):
        cfg = CategoryConfig(2, 2)
        rng = Xorshift64Star(3)
        e = socle_sequence(cfg)
        x = random_automorphism(rng, e.a)
        pushed, mor = pushout_ses(e, x)
        assert mor.g.is_iso()


class TestPushoutPullback:
    def test_pushout_along_identity(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        res, mor = pushout_ses(e, identity_morphism(e.a))
        assert yoneda_equivalent(e, res) is not None

    def test_pullback_along_identity(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        res, mor = pullback_ses(e, identity_morphism(e.c))
        assert yoneda_equivalent(e, res) is not None

    def test_pushout_along_zero_splits(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        x = indecomposable(cfg, 2)
        res, _ = pushout_ses(e, zero_morphism(e.a, x))
        assert is_split(res)

    def test_pullback_along_zero_splits(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        x = indecomposable(cfg, 2)
        res, _ = pullback_ses(e, zero_morphism(x, e.c))
        assert is_split(res)

    def test_pushout_morphism_validates(self):
        cfg = CategoryConfig(2, 3)
        e = socle_sequence(cfg)
        m2 = indecomposable(cfg, 2)
        socle12 = next(f for f in hom_basis(e.a, m2) if not f.is_zero())
        res, mor = pushout_ses(e, socle12)
        assert mor.f == socle12
        assert mor.src is e or mor.src == e
        assert isinstance(mor, SesMorphism)

    def test_mixed_associativity_randomized(self):
        cfg = CategoryConfig(2, 2)
        rng = Xorshift64Star(9)
        mods = [canonical_module(cfg, part) for part in [(1,), (2,), (1, 1)]]
        e = socle_sequence(cfg)
        for _ in range(30):
            y = mods[rng.randrange(len(mods))]
            z = mods[rng.randrange(len(mods))]
            f = morphism_from_coords(
                e.a, y, hom_basis(e.a, y),
                [rng.randrange(2) for _ in hom_basis(e.a, y)])
            g = morphism_from_coords(
                z, e.c, hom_basis(z, e.c),
                [rng.randrange(2) for _ in hom_basis(z, e.c)])
            lhs, _ = pullback_ses(pushout_ses(e, f)[0], g)
            rhs, _ = pushout_ses(pullback_ses(e, g)[0], f)
            assert yoneda_equivalent(lhs, rhs) is not None


class TestDirectSumBaer:
    def test_sum_with_zero_sequence(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        z = zero_module(cfg)
        zero_seq = make_ses(z, identity_morphism(z), z, identity_morphism(z), z)
        total = direct_sum_ses(e, zero_seq)
        assert yoneda_equivalent(total, e) is not None

    def test_split_plus_split(self):
        cfg = CategoryConfig(2, 2)
        m1 = indecomposable(cfg, 1)
        total = direct_sum_ses(split_ses(m1, m1), split_ses(m1, m1))
        assert is_split(total)

    def test_nonsplit_plus_split_is_nonsplit(self):
        cfg = CategoryConfig(2, 2)
        m1 = indecomposable(cfg, 1)
        total = direct_sum_ses(socle_sequence(cfg), split_ses(m1, m1))
        assert not is_split(total)

    def test_baer_neutral_element(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        res = baer_sum(e, split_ses(e.c, e.a))
        assert yoneda_equivalent(res, e) is not None

    def test_baer_self_sum_vanishes_mod2(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        assert is_split(baer_sum(e, e))

    def test_baer_split_plus_split(self):
        cfg = CategoryConfig(2, 2)
        m1 = indecomposable(cfg, 1)
        s = split_ses(m1, m1)
        assert is_split(baer_sum(s, s))

    def test_baer_commutative(self):
        cfg = CategoryConfig(2, 3)
        seqs = enumerate_sequences(cfg, 1, 2)
        e1 = next(s for s in seqs if not is_split(s))
        e2 = split_ses(e1.c, e1.a)
        lhs = baer_sum(e1, e2)
        rhs = baer_sum(e2, e1)
        assert yoneda_equivalent(lhs, rhs) is not None

    def test_baer_commutative_and_associative_enumerated(self):
        # every triple from {split, generator} representatives at N = 2
        cfg = CategoryConfig(2, 2)
        m1 = indecomposable(cfg, 1)
        reps = [split_ses(m1, m1), socle_sequence(cfg)]
        for e1 in reps:
            for e2 in reps:
                assert yoneda_equivalent(baer_sum(e1, e2),
                                         baer_sum(e2, e1)) is not None
                for e3 in reps:
                    lhs = baer_sum(baer_sum(e1, e2), e3)
                    rhs = baer_sum(e1, baer_sum(e2, e3))
                    assert yoneda_equivalent(lhs, rhs) is not None

    def test_baer_evaluation_order_irrelevant(self):
        # pullback-then-pushout (the fixed rule) vs pushout-then-pullback
        from exactkit.ses import (
            codiagonal_morphism,
            diagonal_morphism,
            direct_sum_ses,
        )

        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        for other in (socle_sequence(cfg), split_ses(e.c, e.a)):
            total = direct_sum_ses(e, other)
            fixed = baer_sum(e, other)
            swapped, _ = pullback_ses(
                pushout_ses(total, codiagonal_morphism(e.a))[0],
                diagonal_morphism(e.c))
            assert yoneda_equivalent(fixed, swapped) is not None

    def test_end_mismatch(self):
        cfg = CategoryConfig(2, 2)
        m1, m2 = indecomposable(cfg, 1), indecomposable(cfg, 2)
        with pytest.raises(InputError):
            baer_sum(split_ses(m1, m1), split_ses(m1, m2))


class TestFactorMorphism:
    def test_identity_morphism_factors(self):
        cfg = CategoryConfig(2, 2)
        e = socle_sequence(cfg)
        first, second = factor_ses_morphism(identity_ses_morphism(e))
        assert yoneda_equivalent(e, first.tgt) is not None
        recomposed = compose_ses_morphisms(second, first)
        assert recomposed.g == identity_morphism(e.b)

    def test_pushout_morphism_second_factor_trivial(self):
        cfg = CategoryConfig(2, 3)
        e = socle_sequence(cfg)
        m2 = indecomposable(cfg, 2)
        f = next(h for h in hom_basis(e.a, m2) if not h.is_zero())
        res, mor = pushout_ses(e, f)
        first, second = factor_ses_morphism(mor)
        assert second.h == identity_morphism(e.c)
        assert second.g.is_iso()

    def test_randomized_factorization_relations(self):
        cfg = CategoryConfig(2, 2)
        rng = Xorshift64Star(31)
        e = socle_sequence(cfg)
        mods = [canonical_module(cfg, part) for part in [(1,), (2,), (1, 1)]]
        for _ in range(20):
            y = mods[rng.randrange(len(mods))]
            z = mods[rng.randrange(len(mods))]
            hb_f = hom_basis(e.a, y)
            hb_h = hom_basis(z, e.c)
            f = morphism_from_coords(e.a, y, hb_f,
                                     [rng.randrange(2) for _ in hb_f])
            h = morphism_from_coords(z, e.c, hb_h,
                                     [rng.randrange(2) for _ in hb_h])
            pb, mor_in = pullback_ses(e, h)
            push, mor_out = pushout_ses(e, f)
            mor = compose_ses_morphisms(mor_out, mor_in)
            first, second = factor_ses_morphism(mor)
            mid = first.tgt
            # [f . eps] = [mid] = [eps' . h] at the sequence level
            assert yoneda_equivalent(pushout_ses(pb, mor.f)[0], mid) is not None
            assert yoneda_equivalent(pullback_ses(push, mor.h)[0], mid) is not None
