"""Finite-dimensional modules over Lambda = F_p[x]/(x^N).

A module is a vector space F_p^d together with a nilpotent operator X
satisfying X^N = 0; morphisms are matrices intertwining the operators.
This category is abelian, every construction below is exact matrix
algebra: kernels, cokernels, images, biproducts, Hom bases, and the
decomposition into the indecomposables M_1, ..., M_N (M_i = Lambda/(x^i),
realised as the nilpotent Jordan block of size i).
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .errors import InputError, ValidationError
from .linalg import (
    EchelonAccumulator,
    LinearSystem,
    Matrix,
    block_diag,
    hstack,
    image_basis,
    is_prime,
    kernel_basis,
    rank,
    solve,
)


class CategoryConfig:
    """The ambient choice (p, N): base prime and nilpotency bound."""

    __slots__ = ("p", "N")

    def __init__(self, p: int, N: int):
        if not is_prime(p):
            raise ValidationError("p must be prime, got %d" % p)
        if N < 1:
            raise ValidationError("nilpotency bound N must be >= 1, got %d" % N)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "N", N)

    def __setattr__(self, name, value):
        raise AttributeError("CategoryConfig is immutable")

    def __eq__(self, other):
        return isinstance(other, CategoryConfig) and self.p == other.p and self.N == other.N

    def __hash__(self):
        return hash((self.p, self.N))

    def __repr__(self):
        return "CategoryConfig(p=%d, N=%d)" % (self.p, self.N)


class LambdaModule:
    """A module (d, X) with X^N = 0; use make_module to validate."""

    __slots__ = ("cfg", "dim", "action")

    def __init__(self, cfg: CategoryConfig, action: Matrix, _validated: bool = False):
        if action.rows != action.cols:
            raise ValidationError("action matrix must be square")
        if action.p != cfg.p:
            raise ValidationError("action modulus differs from config")
        if not _validated:
            power = Matrix.identity(cfg.p, action.rows)
            for _ in range(cfg.N):
                power = power * action
            if not power.is_zero():
                raise ValidationError(
                    "nilpotency violation: X^%d != 0 for dim-%d action"
                    % (cfg.N, action.rows)
                )
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "dim", action.rows)
        object.__setattr__(self, "action", action)

    def __setattr__(self, name, value):
        raise AttributeError("LambdaModule is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, LambdaModule)
            and self.cfg == other.cfg
            and self.action == other.action
        )

    def __hash__(self):
        return hash((self.cfg, self.action))

    def __repr__(self):
        return "LambdaModule(dim=%d, p=%d, N=%d)" % (self.dim, self.cfg.p, self.cfg.N)

    def to_json_obj(self) -> dict:
        return {"p": self.cfg.p, "N": self.cfg.N, "dim": self.dim,
                "action": self.action.to_lists()}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LambdaModule":
        cfg = CategoryConfig(obj["p"], obj["N"])
        flat = [x for row in obj["action"] for x in row]
        return make_module(cfg, Matrix(cfg.p, obj["dim"], obj["dim"], flat))


def make_module(cfg: CategoryConfig, action: Matrix) -> LambdaModule:
    return LambdaModule(cfg, action)


def zero_module(cfg: CategoryConfig) -> LambdaModule:
    return LambdaModule(cfg, Matrix(cfg.p, 0, 0, ()), _validated=True)


def indecomposable(cfg: CategoryConfig, i: int) -> LambdaModule:
    """M_i = Lambda/(x^i): the Jordan block e_1 -> e_2 -> ... -> e_i -> 0."""
    if not 1 <= i <= cfg.N:
        raise InputError("indecomposable index %d outside 1..%d" % (i, cfg.N))
    data = [0] * (i * i)
    for r in range(i - 1):
        data[(r + 1) * i + r] = 1
    return LambdaModule(cfg, Matrix(cfg.p, i, i, data), _validated=True)


class ModuleMorphism:
    """A Lambda-linear map, validated at construction."""

    __slots__ = ("src", "tgt", "mat")

    def __init__(self, src: LambdaModule, tgt: LambdaModule, mat: Matrix,
                 _validated: bool = False):
        if src.cfg != tgt.cfg:
            raise InputError("morphism between different configs")
        if mat.rows != tgt.dim or mat.cols != src.dim:
            raise ValidationError(
                "morphism matrix is %dx%d, expected %dx%d"
                % (mat.rows, mat.cols, tgt.dim, src.dim)
            )
        if not _validated and mat * src.action != tgt.action * mat:
            raise ValidationError("matrix does not intertwine the actions")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "tgt", tgt)
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleMorphism is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMorphism)
            and self.src == other.src
            and self.tgt == other.tgt
            and self.mat == other.mat
        )

    def __hash__(self):
        return hash((self.src, self.tgt, self.mat))

    def __repr__(self):
        return "ModuleMorphism(%d -> %d)" % (self.src.dim, self.tgt.dim)

    def __mul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return compose(self, other)

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        if self.src != other.src or self.tgt != other.tgt:
            raise InputError("sum of morphisms with different ends")
        return ModuleMorphism(self.src, self.tgt, self.mat + other.mat,
                              _validated=True)

    def scale(self, a: int) -> "ModuleMorphism":
        return ModuleMorphism(self.src, self.tgt, self.mat.scale(a), _validated=True)

    def is_mono(self) -> bool:
        return kernel_basis(self.mat).dim == 0

    def is_epi(self) -> bool:
        return rank(self.mat) == self.tgt.dim

    def is_iso(self) -> bool:
        return self.src.dim == self.tgt.dim and self.is_mono() and self.is_epi()

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def inverse(self) -> "ModuleMorphism":
        if not self.is_iso():
            raise InputError("inverse of a non-isomorphism")
        inv = solve(self.mat, Matrix.identity(self.mat.p, self.tgt.dim))
        return ModuleMorphism(self.tgt, self.src, inv, _validated=True)

    def to_json_obj(self) -> dict:
        return {"src": self.src.to_json_obj(), "tgt": self.tgt.to_json_obj(),
                "mat": self.mat.to_lists()}


def identity_morphism(m: LambdaModule) -> ModuleMorphism:
    return ModuleMorphism(m, m, Matrix.identity(m.cfg.p, m.dim), _validated=True)


def zero_morphism(src: LambdaModule, tgt: LambdaModule) -> ModuleMorphism:
    return ModuleMorphism(src, tgt, Matrix.zeros(src.cfg.p, tgt.dim, src.dim),
                          _validated=True)


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """g after f."""
    if f.tgt != g.src:
        raise InputError("morphisms not composable")
    return ModuleMorphism(f.src, g.tgt, g.mat * f.mat, _validated=True)


class MorphismFlags:
    __slots__ = ("mono", "epi", "iso", "zero")

    def __init__(self, mono: bool, epi: bool, iso: bool, zero: bool):
        self.mono = mono
        self.epi = epi
        self.iso = iso
        self.zero = zero

    def __repr__(self):
        return "MorphismFlags(mono=%s, epi=%s, iso=%s, zero=%s)" % (
            self.mono, self.epi, self.iso, self.zero)


def classify_morphism(f: ModuleMorphism) -> MorphismFlags:
    mono = f.is_mono()
    epi = f.is_epi()
    return MorphismFlags(mono, epi, mono and epi and f.src.dim == f.tgt.dim,
                         f.is_zero())


def hom_basis(a: LambdaModule, b: LambdaModule) -> List[ModuleMorphism]:
    """Basis of Hom(a, b): the solution space of f X_a = X_b f."""
    if a.cfg != b.cfg:
        raise InputError("hom between different configs")
    sys = LinearSystem(a.cfg.p, b.dim, a.dim)
    sys.add_commute(a.action, b.action)
    ker = sys.kernel()
    out = []
    for vec in ker.basis_vectors():
        mat = Matrix(a.cfg.p, b.dim, a.dim, vec)
        out.append(ModuleMorphism(a, b, mat, _validated=True))
    return out


def morphism_coords(f: ModuleMorphism,
                    basis: Sequence[ModuleMorphism]) -> Tuple[int, ...]:
    """Coordinates of f in a Hom basis (raises if f is outside the span)."""
    p = f.src.cfg.p
    n = f.tgt.dim * f.src.dim
    cols = [Matrix(p, n, 1, g.mat.data) for g in basis]
    target = Matrix(p, n, 1, f.mat.data)
    if not cols:
        if any(f.mat.data):
            raise InputError("morphism outside the span of the basis")
        return ()
    x = solve(hstack(cols), target)
    if x is None:
        raise InputError("morphism outside the span of the basis")
    return x.col_tuple(0)


def morphism_from_coords(a: LambdaModule, b: LambdaModule,
                         basis: Sequence[ModuleMorphism],
                         coords: Sequence[int]) -> ModuleMorphism:
    mat = Matrix.zeros(a.cfg.p, b.dim, a.dim)
    for c, g in zip(coords, basis):
        if c % a.cfg.p:
            mat = mat + g.mat.scale(c)
    return ModuleMorphism(a, b, mat, _validated=True)


class KernelData:
    """Kernel object with its structural mono, universality by dimension."""

    __slots__ = ("obj", "map")

    def __init__(self, obj: LambdaModule, mono: ModuleMorphism):
        self.obj = obj
        self.map = mono


class CokernelData:
    """Cokernel object with the structural epi and a fixed linear section."""

    __slots__ = ("obj", "map", "section")

    def __init__(self, obj: LambdaModule, epi: ModuleMorphism, section: Matrix):
        self.obj = obj
        self.map = epi
        self.section = section


def kernel(f: ModuleMorphism) -> KernelData:
    cfg = f.src.cfg
    sub = kernel_basis(f.mat)
    k = sub.basis
    if sub.dim:
        action = solve(k, f.src.action * k)
    else:
        action = Matrix(cfg.p, 0, 0, ())
    obj = LambdaModule(cfg, action, _validated=True)
    mono = ModuleMorphism(obj, f.src, k, _validated=True)
    if obj.dim != f.src.dim - rank(f.mat):
        raise ValidationError("kernel dimension certificate failed")
    return KernelData(obj, mono)


def cokernel(f: ModuleMorphism) -> CokernelData:
    """Quotient of the target by im(f), with the pivot-extension basis rule.

    Coordinates of the quotient are the non-pivot ambient indices of the
    canonical image basis, taken in increasing order.
    """
    cfg = f.src.cfg
    p = cfg.p
    img = image_basis(f.mat)
    free = img.complement_indices()
    c = img.reduction_matrix()
    n = f.tgt.dim
    sec = [0] * (n * len(free))
    for t, q in enumerate(free):
        sec[q * len(free) + t] = 1
    section = Matrix(p, n, len(free), sec)
    action = c * f.tgt.action * section
    obj = LambdaModule(cfg, action, _validated=True)
    epi = ModuleMorphism(f.tgt, obj, c, _validated=True)
    if not (epi.mat * f.mat).is_zero():
        raise ValidationError("cokernel composite is nonzero")
    if obj.dim != f.tgt.dim - rank(f.mat):
        raise ValidationError("cokernel dimension certificate failed")
    return CokernelData(obj, epi, section)


def image_factorization(f: ModuleMorphism) -> Tuple[ModuleMorphism, ModuleMorphism]:
    """Factor f = m . e with e epi onto the image and m mono."""
    cfg = f.src.cfg
    img = image_basis(f.mat)
    m = img.basis
    if img.dim:
        action = solve(m, f.tgt.action * m)
        e_mat = solve(m, f.mat)
    else:
        action = Matrix(cfg.p, 0, 0, ())
        e_mat = Matrix(cfg.p, 0, f.src.dim, ())
    obj = LambdaModule(cfg, action, _validated=True)
    e = ModuleMorphism(f.src, obj, e_mat, _validated=True)
    mono = ModuleMorphism(obj, f.tgt, m, _validated=True)
    return e, mono


def direct_sum(mods: Sequence[LambdaModule]):
    """Biproduct with canonical inclusions and projections."""
    if mods:
        cfg = mods[0].cfg
        for m in mods:
            if m.cfg != cfg:
                raise InputError("direct sum across configs")
    else:
        raise InputError("direct_sum of an empty list has no config; "
                         "use zero_module")
    p = cfg.p
    total = LambdaModule(cfg, block_diag(p, [m.action for m in mods]),
                         _validated=True)
    incls, projs = [], []
    offset = 0
    for m in mods:
        mu = [0] * (total.dim * m.dim)
        pi = [0] * (m.dim * total.dim)
        for i in range(m.dim):
            mu[(offset + i) * m.dim + i] = 1
            pi[i * total.dim + (offset + i)] = 1
        incls.append(ModuleMorphism(m, total, Matrix(p, total.dim, m.dim, mu),
                                    _validated=True))
        projs.append(ModuleMorphism(total, m, Matrix(p, m.dim, total.dim, pi),
                                    _validated=True))
        offset += m.dim
    return total, incls, projs


def jordan_type(m: LambdaModule) -> Tuple[int, ...]:
    """Partition of dim(m) from the rank sequence of powers of the action."""
    ranks = [m.dim]
    power = Matrix.identity(m.cfg.p, m.dim)
    k = 0
    while ranks[-1] > 0 and k < m.cfg.N:
        power = power * m.action
        ranks.append(rank(power))
        k += 1
    while len(ranks) < m.cfg.N + 2:
        ranks.append(0)
    parts = []
    for size in range(1, m.cfg.N + 1):
        count = ranks[size - 1] - 2 * ranks[size] + ranks[size + 1]
        parts.extend([size] * count)
    parts.sort(reverse=True)
    if sum(parts) != m.dim:
        raise ValidationError("jordan type does not account for the dimension")
    return tuple(parts)


def canonical_module(cfg: CategoryConfig, partition: Sequence[int]) -> LambdaModule:
    """Block-diagonal sum of indecomposables for a partition (parts <= N)."""
    mods = [indecomposable(cfg, part) for part in partition]
    if not mods:
        return zero_module(cfg)
    return direct_sum(mods)[0]


def canonical_iso(m: LambdaModule) -> ModuleMorphism:
    """Isomorphism from m onto the canonical module of its Jordan type.

    Builds a Jordan basis by descending through the kernel filtration of
    the action, starting the longest chains first; chain heads are chosen
    deterministically in kernel-basis order.
    """
    cfg = m.cfg
    p = cfg.p
    d = m.dim
    parts = jordan_type(m)
    target = canonical_module(cfg, parts)
    if d == 0:
        return ModuleMorphism(m, target, Matrix(p, 0, 0, ()), _validated=True)
    X = m.action
    powers = [Matrix.identity(p, d)]
    for _ in range(cfg.N):
        powers.append(powers[-1] * X)
    kers = [kernel_basis(powers[k]) for k in range(cfg.N + 1)]
    s = next(k for k in range(cfg.N + 1) if kers[k].dim == d)
    if s == 0:
        s = 1  # zero module handled above; X = 0 gives s = 1
    chains: List[Tuple[Tuple[int, ...], int]] = []  # (head vector, height)
    for k in range(s, 0, -1):
        acc = EchelonAccumulator(p, d)
        for vec in kers[k - 1].basis_vectors():
            acc.add(vec)
        for head, h in chains:
            if h > k:
                img = powers[h - k] * Matrix.column(p, head)
                acc.add(img.col_tuple(0))
        for vec in kers[k].basis_vectors():
            if acc.add(vec):
                chains.append((vec, k))
    chains.sort(key=lambda ch: -ch[1])
    cols: List[Matrix] = []
    for head, h in chains:
        v = Matrix.column(p, head)
        for t in range(h):
            cols.append(powers[t] * v)
    q = hstack(cols)
    if rank(q) != d:
        raise ValidationError("jordan basis construction failed")
    q_inv = solve(q, Matrix.identity(p, d))
    return ModuleMorphism(m, target, q_inv)


def random_morphism(rng, a: LambdaModule, b: LambdaModule,
                    basis: Optional[Sequence[ModuleMorphism]] = None) -> ModuleMorphism:
    """A morphism with PRNG coefficients over the Hom basis."""
    hb = hom_basis(a, b) if basis is None else list(basis)
    coords = [rng.randrange(a.cfg.p) for _ in hb]
    return morphism_from_coords(a, b, hb, coords)


def random_automorphism(rng, a: LambdaModule, tries: int = 64) -> ModuleMorphism:
    """A random Lambda-linear automorphism (falls back to the identity)."""
    hb = hom_basis(a, a)
    for _ in range(tries):
        f = random_morphism(rng, a, a, hb)
        if f.is_iso():
            return f
    return identity_morphism(a)
