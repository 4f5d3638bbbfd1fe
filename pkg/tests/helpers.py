"""Shared oracles for the test suite.

The Yoneda-side oracle counts extension classes by raw enumeration of
sequences and pairwise equivalence checks; it never touches the
presentation-based coordinate machinery, which is exactly what makes the
agreement tests meaningful.
"""

import itertools

from exactkit.errors import ValidationError
from exactkit.modules import (
    canonical_module,
    hom_basis,
    indecomposable,
    morphism_from_coords,
)
from exactkit.ses import make_ses, yoneda_equivalent
from exactkit.subfunctors import partitions_upto


def enumerate_sequences(cfg, i, j):
    """Every sequence 0 -> M_j -> B -> M_i -> 0 with canonical middle B.

    Every Yoneda class has such a representative: any middle can be
    renamed onto its canonical form by an end-fixing isomorphism.
    """
    c = indecomposable(cfg, i)
    a = indecomposable(cfg, j)
    out = []
    for part in partitions_upto(i + j, cfg.N):
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
                if not (pi.mat * iota.mat).is_zero():
                    continue
                try:
                    out.append(make_ses(a, iota, b, pi, c))
                except ValidationError:
                    continue
    return out


def yoneda_class_reps(cfg, i, j):
    """Representatives of the Yoneda classes of E(M_i, M_j), grouped purely
    by yoneda_equivalent (independent of the coordinate engine)."""
    reps = []
    for seq in enumerate_sequences(cfg, i, j):
        if not any(yoneda_equivalent(seq, rep) is not None for rep in reps):
            reps.append(seq)
    return reps
