"""Exact dense linear algebra over the prime field F_p.

Matrices are immutable values (flat row-major tuples of ints in [0, p)).
Subspaces carry a canonical basis in reduced column echelon form, so two
equal subspaces have identical representations and can be compared or
hashed syntactically.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from . import kernels
from .errors import InputError

_SMALL_PRIMES = frozenset({2, 3, 5, 7, 11, 13})


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n in _SMALL_PRIMES:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Matrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("p", "rows", "cols", "data")

    def __init__(self, p: int, rows: int, cols: int, data: Sequence[int],
                 _normalized: bool = False):
        if rows < 0 or cols < 0:
            raise InputError("matrix dimensions must be non-negative")
        if len(data) != rows * cols:
            raise InputError(
                "matrix data has %d entries, expected %d" % (len(data), rows * cols)
            )
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        # internal call sites pass data already reduced mod p
        object.__setattr__(self, "data",
                           tuple(data) if _normalized else tuple(x % p for x in data))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "Matrix":
        return cls(p, rows, cols, (0,) * (rows * cols), _normalized=True)

    @classmethod
    def identity(cls, p: int, n: int) -> "Matrix":
        data = [0] * (n * n)
        for i in range(n):
            data[i * n + i] = 1
        return cls(p, n, n, data, _normalized=True)

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat: List[int] = []
        for row in rows:
            if len(row) != c:
                raise InputError("ragged rows")
            flat.extend(row)
        return cls(p, r, c, flat)

    @classmethod
    def column(cls, p: int, entries: Sequence[int]) -> "Matrix":
        return cls(p, len(entries), 1, entries)

    def at(self, i: int, j: int) -> int:
        return self.data[i * self.cols + j]

    def row_list(self, i: int) -> List[int]:
        return list(self.data[i * self.cols:(i + 1) * self.cols])

    def col_tuple(self, j: int) -> Tuple[int, ...]:
        return tuple(self.data[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> List[List[int]]:
        return [self.row_list(i) for i in range(self.rows)]

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.p != other.p:
            raise InputError("modulus mismatch")
        if self.cols != other.rows:
            raise InputError(
                "cannot multiply %dx%d by %dx%d"
                % (self.rows, self.cols, other.rows, other.cols)
            )
        out = kernels.mat_mul(
            self.data, self.rows, self.cols, other.data, other.rows, other.cols, self.p
        )
        return Matrix(self.p, self.rows, other.cols, out, _normalized=True)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            self.p, self.rows, self.cols,
            [x + y for x, y in zip(self.data, other.data)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            self.p, self.rows, self.cols,
            [x - y for x, y in zip(self.data, other.data)],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.p, self.rows, self.cols, [-x for x in self.data])

    def scale(self, a: int) -> "Matrix":
        return Matrix(self.p, self.rows, self.cols, [a * x for x in self.data])

    def _same_shape(self, other: "Matrix") -> None:
        if self.p != other.p or self.rows != other.rows or self.cols != other.cols:
            raise InputError("shape or modulus mismatch")

    def transpose(self) -> "Matrix":
        out = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.data[i * self.cols + j]
        return Matrix(self.p, self.cols, self.rows, out, _normalized=True)

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.p, self.rows, self.cols, self.data))

    def __repr__(self):
        return "Matrix(p=%d, %dx%d, %r)" % (self.p, self.rows, self.cols, list(self.data))

    def to_json_obj(self) -> dict:
        return {"p": self.p, "rows": self.rows, "cols": self.cols,
                "data": self.to_lists()}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Matrix":
        flat = [x for row in obj["data"] for x in row]
        return cls(obj["p"], obj["rows"], obj["cols"], flat)


def hstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise InputError("hstack of nothing")
    p = mats[0].p
    rows = mats[0].rows
    data: List[int] = []
    for i in range(rows):
        for m in mats:
            if m.rows != rows or m.p != p:
                raise InputError("hstack shape mismatch")
            data.extend(m.data[i * m.cols:(i + 1) * m.cols])
    return Matrix(p, rows, sum(m.cols for m in mats), data, _normalized=True)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise InputError("vstack of nothing")
    p = mats[0].p
    cols = mats[0].cols
    data: List[int] = []
    for m in mats:
        if m.cols != cols or m.p != p:
            raise InputError("vstack shape mismatch")
        data.extend(m.data)
    return Matrix(p, sum(m.rows for m in mats), cols, data, _normalized=True)


def block_diag(p: int, mats: Sequence[Matrix]) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [0] * (rows * cols)
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            base = (ro + i) * cols + co
            for j in range(m.cols):
                out[base + j] = m.data[i * m.cols + j]
        ro += m.rows
        co += m.cols
    return Matrix(p, rows, cols, out, _normalized=True)


class RrefResult:
    __slots__ = ("reduced", "pivots")

    def __init__(self, reduced: Matrix, pivots: Tuple[int, ...]):
        self.reduced = reduced
        self.pivots = pivots


def rref(m: Matrix) -> RrefResult:
    """Unique reduced row echelon form with strictly increasing pivots."""
    red, piv = kernels.rref(m.data, m.rows, m.cols, m.p)
    return RrefResult(Matrix(m.p, m.rows, m.cols, red, _normalized=True), tuple(piv))


def rank(m: Matrix) -> int:
    return len(rref(m).pivots)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """A particular solution X of a * X = b, or None when none exists.

    Free variables are set to zero; pivots are taken in leftmost column
    order, which makes the choice deterministic.
    """
    if a.rows != b.rows:
        raise InputError("solve: row counts differ (%d vs %d)" % (a.rows, b.rows))
    if a.p != b.p:
        raise InputError("solve: modulus mismatch")
    aug = hstack([a, b]) if a.cols or b.cols else Matrix(a.p, a.rows, 0, ())
    res = rref(aug)
    red = res.reduced
    # any pivot falling in the b block certifies inconsistency
    for c in res.pivots:
        if c >= a.cols:
            return None
    out = [0] * (a.cols * b.cols)
    for r, c in enumerate(res.pivots):
        for j in range(b.cols):
            out[c * b.cols + j] = red.at(r, a.cols + j)
    return Matrix(a.p, a.cols, b.cols, out, _normalized=True)


def solve_alt(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """A particular solution chosen under the reversed variable order.

    Used to double-check that chase constructions do not depend on which
    particular solution ``solve`` happened to pick.
    """
    if a.cols == 0:
        return solve(a, b)
    perm = list(range(a.cols))[::-1]
    cols = [Matrix(a.p, a.rows, 1, a.col_tuple(j)) for j in perm]
    x = solve(hstack(cols), b)
    if x is None:
        return None
    out = [0] * (a.cols * b.cols)
    for idx, j in enumerate(perm):
        for k in range(b.cols):
            out[j * b.cols + k] = x.at(idx, k)
    return Matrix(a.p, a.cols, b.cols, out, _normalized=True)


def kernel_basis(m: Matrix) -> "Subspace":
    """Canonical basis of the null space {v : m v = 0}."""
    res = rref(m)
    red = res.reduced
    pivots = list(res.pivots)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    vecs = []
    for j in free:
        v = [0] * m.cols
        v[j] = 1
        for r, c in enumerate(pivots):
            v[c] = -red.at(r, j) % m.p
        vecs.append(v)
    return Subspace.from_vectors(m.p, m.cols, vecs)


def image_basis(m: Matrix) -> "Subspace":
    """Canonical basis of the column space of m."""
    return Subspace.from_vectors(
        m.p, m.rows, [list(m.col_tuple(j)) for j in range(m.cols)]
    )


class Subspace:
    """Subspace of F_p^n with canonical reduced-column-echelon basis."""

    __slots__ = ("p", "ambient_dim", "basis", "_pivots")

    def __init__(self, p: int, ambient_dim: int, basis: Matrix, pivots: Tuple[int, ...]):
        # internal: callers go through from_vectors / zero / full
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, p: int, ambient_dim: int,
                     vectors: Iterable[Sequence[int]]) -> "Subspace":
        rows = [list(v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise InputError("vector length != ambient dimension")
        if not rows:
            return cls.zero(p, ambient_dim)
        res = rref(Matrix.from_rows(p, rows))
        dim = len(res.pivots)
        red = res.reduced
        cols = [0] * (ambient_dim * dim)
        for k in range(dim):
            for i in range(ambient_dim):
                cols[i * dim + k] = red.at(k, i)
        return cls(p, ambient_dim,
                   Matrix(p, ambient_dim, dim, cols, _normalized=True), res.pivots)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, Matrix(p, ambient_dim, 0, ()), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, Matrix.identity(p, ambient_dim),
                   tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def pivots(self) -> Tuple[int, ...]:
        return self._pivots

    def _check_ambient(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise InputError("ambient mismatch")

    def reduce(self, v: Sequence[int]) -> List[int]:
        """Normal form of v modulo this subspace (zero iff member)."""
        if len(v) != self.ambient_dim:
            raise InputError("vector length != ambient dimension")
        w = [x % self.p for x in v]
        for k, piv in enumerate(self._pivots):
            f = w[piv]
            if f:
                for i in range(self.ambient_dim):
                    w[i] = (w[i] - f * self.basis.at(i, k)) % self.p
        return w

    def member(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(
            self.member(other.basis.col_tuple(k)) for k in range(other.dim)
        )

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        vecs = [list(self.basis.col_tuple(k)) for k in range(self.dim)]
        vecs += [list(other.basis.col_tuple(k)) for k in range(other.dim)]
        return Subspace.from_vectors(self.p, self.ambient_dim, vecs)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        stacked = vstack([self.reduction_matrix(), other.reduction_matrix()])
        return kernel_basis(stacked)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(p=%d, ambient=%d, dim=%d)" % (
            self.p, self.ambient_dim, self.dim)

    def basis_vectors(self) -> List[Tuple[int, ...]]:
        return [self.basis.col_tuple(k) for k in range(self.dim)]

    def complement_indices(self) -> List[int]:
        """Ambient coordinates not used as pivots, in increasing order.

        The corresponding unit vectors project to a basis of the quotient
        by this subspace.
        """
        pivot_set = set(self._pivots)
        return [i for i in range(self.ambient_dim) if i not in pivot_set]

    def reduction_matrix(self) -> Matrix:
        """Matrix H with kernel exactly this subspace.

        Row t of H reads off coordinate q_t of (v reduced modulo the
        basis), where q_t runs over the complement indices.
        """
        free = self.complement_indices()
        out = [0] * (len(free) * self.ambient_dim)
        for t, q in enumerate(free):
            out[t * self.ambient_dim + q] = 1
            for k, piv in enumerate(self._pivots):
                out[t * self.ambient_dim + piv] = -self.basis.at(q, k) % self.p
        return Matrix(self.p, len(free), self.ambient_dim, out, _normalized=True)

    def image_under(self, phi: Matrix) -> "Subspace":
        if phi.cols != self.ambient_dim:
            raise InputError("map domain != ambient dimension")
        return image_basis(phi * self.basis) if self.dim else Subspace.zero(
            phi.p, phi.rows)

    def preimage_under(self, phi: Matrix) -> "Subspace":
        """{x : phi x in self}."""
        if phi.rows != self.ambient_dim:
            raise InputError("map codomain != ambient dimension")
        return kernel_basis(self.reduction_matrix() * phi)

    def to_json_obj(self) -> dict:
        return {"ambient_dim": self.ambient_dim,
                "basis": [list(v) for v in self.basis_vectors()]}


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return u.sum(v)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def subspace_equal(u: Subspace, v: Subspace) -> bool:
    u._check_ambient(v)
    return u == v


def member(u: Subspace, v: Sequence[int]) -> bool:
    return u.member(v)


class EchelonAccumulator:
    """Mutable row-echelon accumulator for incremental span building."""

    __slots__ = ("p", "ambient_dim", "_rows", "_pivot_of_row")

    def __init__(self, p: int, ambient_dim: int):
        self.p = p
        self.ambient_dim = ambient_dim
        self._rows: List[List[int]] = []
        self._pivot_of_row: List[int] = []

    def reduce(self, v: Sequence[int]) -> List[int]:
        w = [x % self.p for x in v]
        for row, piv in zip(self._rows, self._pivot_of_row):
            f = w[piv]
            if f:
                for i in range(piv, self.ambient_dim):
                    w[i] = (w[i] - f * row[i]) % self.p
        return w

    def member(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence[int]) -> bool:
        """Add v to the span; True when it was independent."""
        w = self.reduce(v)
        piv = next((i for i, x in enumerate(w) if x), -1)
        if piv < 0:
            return False
        inv = pow(w[piv], self.p - 2, self.p)
        if inv != 1:
            w = [(x * inv) % self.p for x in w]
        self._rows.append(w)
        self._pivot_of_row.append(piv)
        return True

    @property
    def dim(self) -> int:
        return len(self._rows)

    def to_subspace(self) -> Subspace:
        return Subspace.from_vectors(self.p, self.ambient_dim, self._rows)


class LinearSystem:
    """Accumulates linear equations over a flat vector of unknowns.

    Unknowns represent an r x c matrix Psi in row-major order; helper
    methods contribute the standard morphism equations.
    """

    __slots__ = ("p", "nrows_unknown", "ncols_unknown", "_rows", "_rhs")

    def __init__(self, p: int, nrows_unknown: int, ncols_unknown: int):
        self.p = p
        self.nrows_unknown = nrows_unknown
        self.ncols_unknown = ncols_unknown
        self._rows: List[List[int]] = []
        self._rhs: List[int] = []

    @property
    def n_unknowns(self) -> int:
        return self.nrows_unknown * self.ncols_unknown

    def _idx(self, u: int, v: int) -> int:
        return u * self.ncols_unknown + v

    def add_commute(self, right: Matrix, left: Matrix) -> None:
        """Equations Psi * right - left * Psi = 0.

        right is ncols_unknown-square, left is nrows_unknown-square.
        """
        n, m = self.nrows_unknown, self.ncols_unknown
        p = self.p
        rdat = right.data
        ldat = left.data
        rows = self._rows
        rhs = self._rhs
        for i in range(n):
            ibase = i * m
            lrow = ldat[i * n:(i + 1) * n]
            for j in range(m):
                row = [0] * (n * m)
                for v in range(m):
                    x = rdat[v * m + j]
                    if x:
                        row[ibase + v] = x
                for u in range(n):
                    x = lrow[u]
                    if x:
                        idx = u * m + j
                        row[idx] = (row[idx] - x) % p
                rows.append(row)
                rhs.append(0)

    def add_left_compose(self, m: Matrix, target: Matrix) -> None:
        """Equations m * Psi = target (m has nrows_unknown columns)."""
        nu, mu = self.nrows_unknown, self.ncols_unknown
        mdat = m.data
        tdat = target.data
        for i in range(m.rows):
            mrow = mdat[i * nu:(i + 1) * nu]
            for j in range(mu):
                row = [0] * (nu * mu)
                for u in range(nu):
                    x = mrow[u]
                    if x:
                        row[u * mu + j] = x
                self._rows.append(row)
                self._rhs.append(tdat[i * target.cols + j])

    def add_right_compose(self, m: Matrix, target: Matrix) -> None:
        """Equations Psi * m = target (m has ncols_unknown rows)."""
        nu, mu = self.nrows_unknown, self.ncols_unknown
        mdat = m.data
        tdat = target.data
        for i in range(nu):
            ibase = i * mu
            for j in range(m.cols):
                row = [0] * (nu * mu)
                for v in range(mu):
                    x = mdat[v * m.cols + j]
                    if x:
                        row[ibase + v] = x
                self._rows.append(row)
                self._rhs.append(tdat[i * target.cols + j])

    def solve(self) -> Optional[Matrix]:
        """A particular solution as an nrows x ncols matrix, or None."""
        a = self._coefficient_matrix()
        b = Matrix(self.p, len(self._rhs), 1, self._rhs, _normalized=True)
        x = solve(a, b)
        if x is None:
            return None
        return Matrix(self.p, self.nrows_unknown, self.ncols_unknown, x.data)

    def kernel(self) -> Subspace:
        return kernel_basis(self._coefficient_matrix())

    def _coefficient_matrix(self) -> Matrix:
        flat = []
        for row in self._rows:
            flat.extend(row)
        return Matrix(self.p, len(self._rows), self.n_unknowns, flat,
                      _normalized=True)
