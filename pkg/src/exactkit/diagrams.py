"""Commutative 3x3 diagrams and Snake-lemma constructions.

Grid letters follow the fixed layout

        a     b                 rows:    (1,1) -a-> (1,2) -b-> (1,3)
     A --> B --> C                       (2,1) -d-> (2,2) -e-> (2,3)
   i |   j |   c |                       (3,1) -g-> (3,2) -h-> (3,3)
     D --> E --> G
   k |   l |   f |          columns use i,k / j,l / c,f.
     H --> I --> J
        g     h

A grid is plain data; verify_grid computes each commutativity and
exactness flag independently, so invalid grids are representable (they
are the negative controls).
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .errors import InputError, ValidationError
from .prng import Xorshift64Star
from .linalg import Matrix, hstack, image_basis, kernel_basis, solve, solve_alt
from .modules import (
    LambdaModule,
    ModuleMorphism,
    cokernel,
    compose,
    identity_morphism,
    kernel,
    zero_module,
    zero_morphism,
)
from .ses import SesMorphism, ShortExactSeq, make_ses, pullback_ses, pushout_ses

ROW_NAMES = (("a", "b"), ("d", "e"), ("g", "h"))
COL_NAMES = (("i", "k"), ("j", "l"), ("c", "f"))


class Grid3x3:
    """Nine modules and twelve maps; validity is checked by verify_grid."""

    __slots__ = ("mods", "row_maps", "col_maps")

    def __init__(self, mods: Dict[Tuple[int, int], LambdaModule],
                 row_maps: Dict[str, ModuleMorphism],
                 col_maps: Dict[str, ModuleMorphism]):
        for r in (1, 2, 3):
            for c in (1, 2, 3):
                if (r, c) not in mods:
                    raise InputError("missing module at %r" % ((r, c),))
        for r in (1, 2, 3):
            first, second = ROW_NAMES[r - 1]
            self._check_ends(row_maps[first], mods[(r, 1)], mods[(r, 2)])
            self._check_ends(row_maps[second], mods[(r, 2)], mods[(r, 3)])
        for c in (1, 2, 3):
            first, second = COL_NAMES[c - 1]
            self._check_ends(col_maps[first], mods[(1, c)], mods[(2, c)])
            self._check_ends(col_maps[second], mods[(2, c)], mods[(3, c)])
        self.mods = dict(mods)
        self.row_maps = dict(row_maps)
        self.col_maps = dict(col_maps)

    @staticmethod
    def _check_ends(f: ModuleMorphism, src: LambdaModule, tgt: LambdaModule):
        if f.src != src or f.tgt != tgt:
            raise InputError("grid morphism endpoints do not match the layout")

    def row(self, r: int) -> Tuple[ModuleMorphism, ModuleMorphism]:
        first, second = ROW_NAMES[r - 1]
        return self.row_maps[first], self.row_maps[second]

    def col(self, c: int) -> Tuple[ModuleMorphism, ModuleMorphism]:
        first, second = COL_NAMES[c - 1]
        return self.col_maps[first], self.col_maps[second]

    def row_seq(self, r: int) -> ShortExactSeq:
        """The r-th row as a validated sequence (raises if not exact)."""
        mono, epi = self.row(r)
        return make_ses(self.mods[(r, 1)], mono, self.mods[(r, 2)], epi,
                        self.mods[(r, 3)])

    def col_seq(self, c: int) -> ShortExactSeq:
        mono, epi = self.col(c)
        return make_ses(self.mods[(1, c)], mono, self.mods[(2, c)], epi,
                        self.mods[(3, c)])

    def transpose(self) -> "Grid3x3":
        mods = {(r, c): self.mods[(c, r)] for r in (1, 2, 3) for c in (1, 2, 3)}
        row_maps = {"a": self.col_maps["i"], "b": self.col_maps["k"],
                    "d": self.col_maps["j"], "e": self.col_maps["l"],
                    "g": self.col_maps["c"], "h": self.col_maps["f"]}
        col_maps = {"i": self.row_maps["a"], "k": self.row_maps["b"],
                    "j": self.row_maps["d"], "l": self.row_maps["e"],
                    "c": self.row_maps["g"], "f": self.row_maps["h"]}
        return Grid3x3(mods, row_maps, col_maps)

    def to_json_obj(self) -> dict:
        return {
            "modules": {"%d,%d" % pos: m.to_json_obj()
                        for pos, m in sorted(self.mods.items())},
            "rows": {k: v.mat.to_lists() for k, v in sorted(self.row_maps.items())},
            "cols": {k: v.mat.to_lists() for k, v in sorted(self.col_maps.items())},
        }


class GridReport:
    __slots__ = ("commutes", "bad_square", "rows_exact", "cols_exact")

    def __init__(self, commutes, bad_square, rows_exact, cols_exact):
        self.commutes = commutes
        self.bad_square = bad_square
        self.rows_exact = rows_exact
        self.cols_exact = cols_exact

    @property
    def all_pass(self) -> bool:
        return self.commutes and all(self.rows_exact) and all(self.cols_exact)

    def __repr__(self):
        return "GridReport(commutes=%s, rows=%s, cols=%s)" % (
            self.commutes, self.rows_exact, self.cols_exact)


def verify_grid(grid: Grid3x3) -> GridReport:
    """Commutativity of the four interior squares plus row/column exactness."""
    rm, cm = grid.row_maps, grid.col_maps
    squares = [
        ("top-left", cm["j"].mat * rm["a"].mat, rm["d"].mat * cm["i"].mat),
        ("top-right", cm["c"].mat * rm["b"].mat, rm["e"].mat * cm["j"].mat),
        ("bottom-left", cm["l"].mat * rm["d"].mat, rm["g"].mat * cm["k"].mat),
        ("bottom-right", cm["f"].mat * rm["e"].mat, rm["h"].mat * cm["l"].mat),
    ]
    bad = None
    for name, lhs, rhs in squares:
        if lhs != rhs:
            bad = name
            break
    rows_exact = []
    for r in (1, 2, 3):
        try:
            grid.row_seq(r)
            rows_exact.append(True)
        except ValidationError:
            rows_exact.append(False)
    cols_exact = []
    for c in (1, 2, 3):
        try:
            grid.col_seq(c)
            cols_exact.append(True)
        except ValidationError:
            cols_exact.append(False)
    return GridReport(bad is None, bad, rows_exact, cols_exact)


def _induced_on_cokernels(phi: ModuleMorphism, ck_src, ck_tgt) -> ModuleMorphism:
    """Map Coker(f) -> Coker(g) induced by phi (well-definedness assumed,
    Lambda-linearity is validated)."""
    mat = ck_tgt.map.mat * phi.mat * ck_src.section
    return ModuleMorphism(ck_src.obj, ck_tgt.obj, mat)


def snake_grid(f: ModuleMorphism, g: ModuleMorphism) -> Grid3x3:
    """The cokernel grid of a composable pair of monomorphisms.

    Rows: 0 -> A = A -> 0, 0 -> B -> C -> Coker g, and
    0 -> Coker f -> Coker h -> Coker g, with h = g.f.
    """
    if f.tgt != g.src:
        raise InputError("morphisms not composable")
    if not f.is_mono() or not g.is_mono():
        raise InputError("snake_grid needs two monomorphisms")
    cfg = f.src.cfg
    h = compose(g, f)
    ck_f = cokernel(f)
    ck_g = cokernel(g)
    ck_h = cokernel(h)
    m = _induced_on_cokernels(g, ck_f, ck_h)
    n = _induced_on_cokernels(identity_morphism(g.tgt), ck_h, ck_g)
    zero = zero_module(cfg)
    a_mod, b_mod, c_mod = f.src, f.tgt, g.tgt
    mods = {(1, 1): a_mod, (1, 2): a_mod, (1, 3): zero,
            (2, 1): b_mod, (2, 2): c_mod, (2, 3): ck_g.obj,
            (3, 1): ck_f.obj, (3, 2): ck_h.obj, (3, 3): ck_g.obj}
    row_maps = {"a": identity_morphism(a_mod), "b": zero_morphism(a_mod, zero),
                "d": g, "e": ck_g.map,
                "g": m, "h": n}
    col_maps = {"i": f, "k": ck_f.map,
                "j": h, "l": ck_h.map,
                "c": zero_morphism(zero, ck_g.obj),
                "f": identity_morphism(ck_g.obj)}
    return Grid3x3(mods, row_maps, col_maps)


def _induced_on_kernels(phi: ModuleMorphism, k_src, k_tgt) -> ModuleMorphism:
    mat = solve(k_tgt.map.mat, phi.mat * k_src.map.mat)
    if mat is None:
        raise ValidationError("map does not restrict to the kernels")
    return ModuleMorphism(k_src.obj, k_tgt.obj, mat)


def snake_grid_epi(f: ModuleMorphism, g: ModuleMorphism) -> Grid3x3:
    """The kernel grid of a composable pair of epimorphisms (dual of
    snake_grid)."""
    if f.tgt != g.src:
        raise InputError("morphisms not composable")
    if not f.is_epi() or not g.is_epi():
        raise InputError("snake_grid_epi needs two epimorphisms")
    cfg = f.src.cfg
    h = compose(g, f)
    k_f = kernel(f)
    k_g = kernel(g)
    k_h = kernel(h)
    u = _induced_on_kernels(identity_morphism(f.src), k_f, k_h)
    v = _induced_on_kernels(f, k_h, k_g)
    zero = zero_module(cfg)
    mods = {(1, 1): k_f.obj, (1, 2): k_h.obj, (1, 3): k_g.obj,
            (2, 1): k_f.obj, (2, 2): f.src, (2, 3): f.tgt,
            (3, 1): zero, (3, 2): g.tgt, (3, 3): g.tgt}
    row_maps = {"a": u, "b": v,
                "d": k_f.map, "e": f,
                "g": zero_morphism(zero, g.tgt), "h": identity_morphism(g.tgt)}
    col_maps = {"i": identity_morphism(k_f.obj), "k": zero_morphism(k_f.obj, zero),
                "j": k_h.map, "l": h,
                "c": k_g.map, "f": g}
    return Grid3x3(mods, row_maps, col_maps)


class SnakeReport:
    __slots__ = ("delta", "positions", "iso_checks")

    def __init__(self, delta, positions, iso_checks):
        self.delta = delta
        self.positions = positions
        self.iso_checks = iso_checks

    @property
    def all_pass(self) -> bool:
        return all(ok for _, ok in self.positions) and all(
            ok for _, ok in self.iso_checks)


def snake_connecting(mor: SesMorphism) -> Tuple[ModuleMorphism, SnakeReport]:
    """Connecting map Ker(h) -> Coker(f) of a morphism of sequences, plus
    the six-term exactness report.

    The chase lifts through the top epi, applies g, and pulls back through
    the bottom mono; choice-independence is asserted by repeating the
    chase with the reversed-pivot solver.
    """
    src, tgt = mor.src, mor.tgt
    k_f, k_g, k_h = kernel(mor.f), kernel(mor.g), kernel(mor.h)
    c_f, c_g, c_h = cokernel(mor.f), cokernel(mor.g), cokernel(mor.h)
    k1 = _induced_on_kernels(src.i, k_f, k_g)
    k2 = _induced_on_kernels(src.p, k_g, k_h)
    c1 = _induced_on_cokernels(tgt.i, c_f, c_g)
    c2 = _induced_on_cokernels(tgt.p, c_g, c_h)

    def chase(solver) -> Matrix:
        cols = []
        for t in range(k_h.obj.dim):
            v = Matrix.column(src.c.cfg.p, k_h.map.mat.col_tuple(t))
            b = solver(src.p.mat, v)
            if b is None:
                raise ValidationError("failed to lift through the epimorphism")
            w = mor.g.mat * b
            aprime = solver(tgt.i.mat, w)
            if aprime is None:
                raise ValidationError("chase left the image of the mono")
            cols.append(c_f.map.mat * aprime)
        if not cols:
            return Matrix(src.c.cfg.p, c_f.obj.dim, 0, ())
        return hstack(cols)

    delta_mat = chase(solve)
    if delta_mat != chase(solve_alt):
        raise ValidationError("connecting map depends on lift choices")
    delta = ModuleMorphism(k_h.obj, c_f.obj, delta_mat)

    positions = [
        ("Ker f", kernel_basis(k1.mat).dim == 0),
        ("Ker g", image_basis(k1.mat) == kernel_basis(k2.mat)),
        ("Ker h", image_basis(k2.mat) == kernel_basis(delta.mat)),
        ("Coker f", image_basis(delta.mat) == kernel_basis(c1.mat)),
        ("Coker g", image_basis(c1.mat) == kernel_basis(c2.mat)),
        ("Coker h", c2.is_epi()),
    ]
    iso_checks: List[Tuple[str, bool]] = [
        ("t.c_f = c_g.d", c1.mat * c_f.map.mat == c_g.map.mat * tgt.i.mat),
        ("u.c_g = c_h.e", c2.mat * c_g.map.mat == c_h.map.mat * tgt.p.mat),
    ]
    if mor.h.src == mor.h.tgt and mor.h.mat == Matrix.identity(
            mor.h.mat.p, mor.h.mat.rows):
        iso_checks.append(("t iso (h = id)", c1.is_iso()))
    if mor.f.src == mor.f.tgt and mor.f.mat == Matrix.identity(
            mor.f.mat.p, mor.f.mat.rows):
        iso_checks.append(("u iso (f = id)", c2.is_iso()))
    return delta, SnakeReport(delta, positions, iso_checks)


def completion_grid_push(e: ShortExactSeq, u: ModuleMorphism) -> Grid3x3:
    """Premise-oriented grid from a sequence and a mono out of its subobject.

    Rows: e, the pushout u.e, and the induced map of cokernels; columns:
    the cokernel sequences of u and of the pushout middle map, and the
    split column on the quotient end.
    """
    if not u.is_mono():
        raise InputError("completion needs a monomorphism")
    pushed, mor = pushout_ses(e, u)
    j = mor.g
    ck_u = cokernel(u)
    ck_j = cokernel(j)
    t = _induced_on_cokernels(pushed.i, ck_u, ck_j)
    cfg = e.a.cfg
    zero = zero_module(cfg)
    mods = {(1, 1): e.a, (1, 2): e.b, (1, 3): e.c,
            (2, 1): pushed.a, (2, 2): pushed.b, (2, 3): pushed.c,
            (3, 1): ck_u.obj, (3, 2): ck_j.obj, (3, 3): zero}
    row_maps = {"a": e.i, "b": e.p,
                "d": pushed.i, "e": pushed.p,
                "g": t, "h": zero_morphism(ck_j.obj, zero)}
    col_maps = {"i": u, "k": ck_u.map,
                "j": j, "l": ck_j.map,
                "c": identity_morphism(e.c), "f": zero_morphism(e.c, zero)}
    return Grid3x3(mods, row_maps, col_maps)


def completion_grid_pull(e: ShortExactSeq, v: ModuleMorphism) -> Grid3x3:
    """Premise-oriented grid from a sequence and an epi onto its quotient."""
    if not v.is_epi():
        raise InputError("completion needs an epimorphism")
    pulled, mor = pullback_ses(e, v)
    w = mor.g
    k_w = kernel(w)
    k_v = kernel(v)
    s = _induced_on_kernels(pulled.p, k_w, k_v)
    cfg = e.a.cfg
    zero = zero_module(cfg)
    mods = {(1, 1): zero, (1, 2): k_w.obj, (1, 3): k_v.obj,
            (2, 1): pulled.a, (2, 2): pulled.b, (2, 3): pulled.c,
            (3, 1): e.a, (3, 2): e.b, (3, 3): e.c}
    row_maps = {"a": zero_morphism(zero, k_w.obj), "b": s,
                "d": pulled.i, "e": pulled.p,
                "g": e.i, "h": e.p}
    col_maps = {"i": zero_morphism(zero, pulled.a),
                "k": identity_morphism(e.a),
                "j": k_w.map, "l": w,
                "c": k_v.map, "f": v}
    return Grid3x3(mods, row_maps, col_maps)


class GeneratedGrid:
    """A grid plus its provenance, consumed by the 3x3 property checker."""

    __slots__ = ("grid", "kind")

    def __init__(self, grid: Grid3x3, kind: str):
        self.grid = grid
        self.kind = kind


def generate_grids(F, seed: int, count: int,
                   mono_pairs: Optional[List[Tuple[ModuleMorphism, ModuleMorphism]]] = None,
                   epi_pairs: Optional[List[Tuple[ModuleMorphism, ModuleMorphism]]] = None) -> List[GeneratedGrid]:
    """Premise-oriented candidate grids for the 3x3 property of F.

    Combines transposed snake grids over composable F-mono / F-epi pairs
    (the only place a violation can hide) with randomized pushout and
    pullback completions whose partners are realized from F-classes, so
    every emitted grid is composable by construction; deterministic under
    the seed.
    """
    rng = Xorshift64Star(seed)
    grids: List[GeneratedGrid] = []
    if mono_pairs is None:
        mono_pairs = F.targeted_mono_pairs()
    if epi_pairs is None:
        epi_pairs = F.targeted_epi_pairs()
    for f, g in mono_pairs:
        grids.append(GeneratedGrid(snake_grid(f, g).transpose(), "snake-mono"))
    for f, g in epi_pairs:
        grids.append(GeneratedGrid(snake_grid_epi(f, g).transpose(), "snake-epi"))
    pool = F.grid_base_pool()
    n = F.skeleton.cfg.N
    guard = 0
    while len(grids) < count and pool and guard < 8 * count:
        guard += 1
        e = pool[rng.randrange(len(pool))]
        k = 1 + rng.randrange(n)
        if rng.randrange(2) == 0:
            u = F.random_class_mono(e.a, k, rng)
            if u is None:
                continue
            grids.append(GeneratedGrid(completion_grid_push(e, u),
                                       "completion-push"))
        else:
            v = F.random_class_epi(e.c, k, rng)
            if v is None:
                continue
            grids.append(GeneratedGrid(completion_grid_pull(e, v),
                                       "completion-pull"))
    return grids
