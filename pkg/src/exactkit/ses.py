"""Short exact sequences and their Yoneda calculus.

A sequence 0 -> A -i-> B -p-> C -> 0 is a first-class validated value;
pushouts, pullbacks, direct sums and Baer sums are computed explicitly.
Representatives are never canonicalized here; canonical coordinates live
in the ext module.
"""

from __future__ import annotations

from typing import Optional, Tuple

from .errors import InputError, ValidationError
from .linalg import (
    LinearSystem,
    Matrix,
    block_diag,
    hstack,
    image_basis,
    kernel_basis,
    solve,
    vstack,
)
from .modules import (
    CokernelData,
    LambdaModule,
    ModuleMorphism,
    cokernel,
    compose,
    direct_sum,
    identity_morphism,
    kernel,
)


class ShortExactSeq:
    """Validated 0 -> a -i-> b -p-> c -> 0."""

    __slots__ = ("a", "i", "b", "p", "c")

    def __init__(self, a: LambdaModule, i: ModuleMorphism, b: LambdaModule,
                 p: ModuleMorphism, c: LambdaModule):
        if i.src != a or i.tgt != b:
            raise ValidationError("i does not run a -> b")
        if p.src != b or p.tgt != c:
            raise ValidationError("p does not run b -> c")
        if not i.is_mono():
            raise ValidationError("i not mono")
        if not p.is_epi():
            raise ValidationError("p not epi")
        if not (p.mat * i.mat).is_zero():
            raise ValidationError("p . i nonzero")
        if image_basis(i.mat) != kernel_basis(p.mat):
            raise ValidationError("im(i) != ker(p)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("ShortExactSeq is immutable")

    def __repr__(self):
        return "ShortExactSeq(%d -> %d -> %d)" % (self.a.dim, self.b.dim, self.c.dim)

    def __eq__(self, other):
        return (
            isinstance(other, ShortExactSeq)
            and self.a == other.a and self.i == other.i
            and self.b == other.b and self.p == other.p
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.a, self.i, self.b, self.p, self.c))

    def to_json_obj(self) -> dict:
        return {"a": self.a.to_json_obj(), "i": self.i.mat.to_lists(),
                "b": self.b.to_json_obj(), "p": self.p.mat.to_lists(),
                "c": self.c.to_json_obj()}


def make_ses(a: LambdaModule, i: ModuleMorphism, b: LambdaModule,
             p: ModuleMorphism, c: LambdaModule) -> ShortExactSeq:
    return ShortExactSeq(a, i, b, p, c)


class SesMorphism:
    """A commuting triple (f, g, h) between two sequences."""

    __slots__ = ("src", "tgt", "f", "g", "h")

    def __init__(self, src: ShortExactSeq, tgt: ShortExactSeq,
                 f: ModuleMorphism, g: ModuleMorphism, h: ModuleMorphism):
        if f.src != src.a or f.tgt != tgt.a:
            raise ValidationError("f does not connect the left ends")
        if g.src != src.b or g.tgt != tgt.b:
            raise ValidationError("g does not connect the middles")
        if h.src != src.c or h.tgt != tgt.c:
            raise ValidationError("h does not connect the right ends")
        if g.mat * src.i.mat != tgt.i.mat * f.mat:
            raise ValidationError("left square does not commute")
        if h.mat * src.p.mat != tgt.p.mat * g.mat:
            raise ValidationError("right square does not commute")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "tgt", tgt)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)

    def __setattr__(self, name, value):
        raise AttributeError("SesMorphism is immutable")

    def to_json_obj(self) -> dict:
        return {"f": self.f.mat.to_lists(), "g": self.g.mat.to_lists(),
                "h": self.h.mat.to_lists()}


def identity_ses_morphism(e: ShortExactSeq) -> SesMorphism:
    return SesMorphism(e, e, identity_morphism(e.a), identity_morphism(e.b),
                       identity_morphism(e.c))


def compose_ses_morphisms(second: SesMorphism, first: SesMorphism) -> SesMorphism:
    if first.tgt != second.src:
        raise InputError("SES morphisms not composable")
    return SesMorphism(first.src, second.tgt,
                       compose(second.f, first.f),
                       compose(second.g, first.g),
                       compose(second.h, first.h))


def split_ses(c: LambdaModule, a: LambdaModule) -> ShortExactSeq:
    """The split sequence 0 -> a -> a (+) c -> c -> 0 with canonical maps."""
    if a.cfg != c.cfg:
        raise InputError("split_ses across configs")
    total, incls, projs = direct_sum([a, c])
    return ShortExactSeq(a, incls[0], total, projs[1], c)


def yoneda_equivalent(e1: ShortExactSeq, e2: ShortExactSeq) -> Optional[ModuleMorphism]:
    """Witness g with (1_A, g, 1_C): e1 -> e2, or None.

    End objects must be literally identical; the witness, when it exists,
    is an isomorphism (Five Lemma) and that is checked.
    """
    if e1.a != e2.a or e1.c != e2.c:
        raise InputError("yoneda_equivalent requires identical end objects")
    p = e1.a.cfg.p
    sys = LinearSystem(p, e2.b.dim, e1.b.dim)
    sys.add_commute(e1.b.action, e2.b.action)
    sys.add_right_compose(e1.i.mat, e2.i.mat)
    sys.add_left_compose(e2.p.mat, e1.p.mat)
    mat = sys.solve()
    if mat is None:
        return None
    g = ModuleMorphism(e1.b, e2.b, mat, _validated=True)
    if not g.is_iso():
        raise ValidationError("Yoneda witness failed to be an isomorphism")
    return g


def pushout_ses(e: ShortExactSeq, f: ModuleMorphism) -> Tuple[ShortExactSeq, SesMorphism]:
    """The pushout of e along f: A -> A', plus the morphism (f, l, 1_C).

    The new middle is the cokernel of (i, -f): A -> B (+) A'.
    """
    if f.src != e.a:
        raise InputError("pushout morphism must start at the subobject end")
    cfg = e.a.cfg
    aprime = f.tgt
    total, incls, _ = direct_sum([e.b, aprime])
    glue_mat = vstack([e.i.mat, -f.mat])
    glue = ModuleMorphism(e.a, total, glue_mat, _validated=True)
    cok = cokernel(glue)
    bprime = cok.obj
    l = compose(cok.map, incls[0])
    j = compose(cok.map, incls[1])
    # q is induced by [p, 0] on the quotient, computed through the section
    induced = hstack([e.p.mat, Matrix.zeros(cfg.p, e.c.dim, aprime.dim)])
    q_mat = induced * cok.section
    q = ModuleMorphism(bprime, e.c, q_mat, _validated=True)
    result = ShortExactSeq(aprime, j, bprime, q, e.c)
    mor = SesMorphism(e, result, f, l, identity_morphism(e.c))
    return result, mor


def pullback_ses(e: ShortExactSeq, g: ModuleMorphism) -> Tuple[ShortExactSeq, SesMorphism]:
    """The pullback of e along g: C' -> C, plus the morphism (1_A, w, g).

    The new middle is the kernel of (p, -g): B (+) C' -> C.
    """
    if g.tgt != e.c:
        raise InputError("pullback morphism must end at the quotient end")
    cfg = e.a.cfg
    cprime = g.src
    total, _, projs = direct_sum([e.b, cprime])
    glue_mat = hstack([e.p.mat, -g.mat])
    glue = ModuleMorphism(total, e.c, glue_mat, _validated=True)
    ker = kernel(glue)
    bsec = ker.obj
    w = compose(projs[0], ker.map)
    pprime = compose(projs[1], ker.map)
    # i'' is the unique lift of (i, 0) through the kernel inclusion
    stacked = vstack([e.i.mat, Matrix.zeros(cfg.p, cprime.dim, e.a.dim)])
    i_mat = solve(ker.map.mat, stacked)
    if i_mat is None:
        raise ValidationError("pullback failed to lift the subobject")
    i2 = ModuleMorphism(e.a, bsec, i_mat, _validated=True)
    result = ShortExactSeq(e.a, i2, bsec, pprime, cprime)
    mor = SesMorphism(result, e, identity_morphism(e.a), w, g)
    return result, mor


def direct_sum_ses(e1: ShortExactSeq, e2: ShortExactSeq) -> ShortExactSeq:
    if e1.a.cfg != e2.a.cfg:
        raise InputError("direct sum across configs")
    p = e1.a.cfg.p
    a, _, _ = direct_sum([e1.a, e2.a])
    b, _, _ = direct_sum([e1.b, e2.b])
    c, _, _ = direct_sum([e1.c, e2.c])
    i = ModuleMorphism(a, b, block_diag(p, [e1.i.mat, e2.i.mat]), _validated=True)
    pr = ModuleMorphism(b, c, block_diag(p, [e1.p.mat, e2.p.mat]), _validated=True)
    return ShortExactSeq(a, i, b, pr, c)


def diagonal_morphism(c: LambdaModule) -> ModuleMorphism:
    total, _, _ = direct_sum([c, c])
    ident = Matrix.identity(c.cfg.p, c.dim)
    return ModuleMorphism(c, total, vstack([ident, ident]), _validated=True)


def codiagonal_morphism(a: LambdaModule) -> ModuleMorphism:
    total, _, _ = direct_sum([a, a])
    ident = Matrix.identity(a.cfg.p, a.dim)
    return ModuleMorphism(total, a, hstack([ident, ident]), _validated=True)


def baer_sum(e1: ShortExactSeq, e2: ShortExactSeq) -> ShortExactSeq:
    """Representative of [e1] + [e2]: pull back along the diagonal, then
    push out along the codiagonal."""
    if e1.a != e2.a or e1.c != e2.c:
        raise InputError("Baer sum requires identical end objects")
    total = direct_sum_ses(e1, e2)
    pulled, _ = pullback_ses(total, diagonal_morphism(e1.c))
    pushed, _ = pushout_ses(pulled, codiagonal_morphism(e1.a))
    return pushed


def factor_ses_morphism(mor: SesMorphism) -> Tuple[SesMorphism, SesMorphism]:
    """Factor (f, g, h) through the pushout: (f, g, h) = (1, g', h).(f, l, 1).

    The intermediate sequence is f . src, and the relations
    [f . src] = [mid] = [tgt . h] hold by construction.
    """
    e, ep = mor.src, mor.tgt
    mid, first = pushout_ses(e, mor.f)
    # g' : mid.b -> ep.b induced by [g, i'] on the pushout quotient
    cok = _pushout_cokernel(e, mor.f)
    phi = hstack([mor.g.mat, ep.i.mat])
    gp_mat = phi * cok.section
    gp = ModuleMorphism(mid.b, ep.b, gp_mat, _validated=True)
    second = SesMorphism(mid, ep, identity_morphism(mid.a), gp, mor.h)
    recomposed = compose_ses_morphisms(second, first)
    if recomposed.g != mor.g:
        raise ValidationError("factorization failed to recompose")
    return first, second


def _pushout_cokernel(e: ShortExactSeq, f: ModuleMorphism) -> CokernelData:
    cfg = e.a.cfg
    total, _, _ = direct_sum([e.b, f.tgt])
    glue_mat = vstack([e.i.mat, -f.mat])
    glue = ModuleMorphism(e.a, total, glue_mat, _validated=True)
    return cokernel(glue)


def is_split(e: ShortExactSeq) -> bool:
    """Does e admit a retraction of i (equivalently a section of p)?"""
    sys = LinearSystem(e.a.cfg.p, e.a.dim, e.b.dim)
    sys.add_commute(e.b.action, e.a.action)
    sys.add_right_compose(e.i.mat, Matrix.identity(e.a.cfg.p, e.a.dim))
    return sys.solve() is not None


def random_ses(rng, c: LambdaModule, a: LambdaModule) -> ShortExactSeq:
    """A random extension of c by a (used by the property suites)."""
    from . import ext

    basis = ext.ext_basis(c, a)
    coords = [rng.randrange(a.cfg.p) for _ in range(basis.dim)]
    return ext.realize(ext.ExtClass(basis, tuple(coords)))
