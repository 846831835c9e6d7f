"""Vectors, subspaces and cosets over GF(q).

Vectors are plain tuples of element codes. A point of F_q^d also has an
integer index, big-endian in the coordinates: (0, 1, 2) over GF(3) is
0*9 + 1*3 + 2 = 5. Subspaces are stored by their reduced row-echelon basis,
which is unique, so two Subspace values are equal exactly when they span the
same space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from geobatch.errors import DimensionMismatch, IndexOutOfRange
from geobatch.finite_field import Field

Vector = tuple[int, ...]


def _rows(field: Field, vectors: Iterable[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    rows = [list(v) for v in vectors]
    if ncols is None and rows:
        ncols = len(rows[0])
    for r in rows:
        if len(r) != ncols:
            raise DimensionMismatch(f"expected rows of length {ncols}, got {len(r)}")
        for c in r:
            if not 0 <= c < field.q:
                raise IndexOutOfRange(f"element code {c} outside [0, {field.q})")
    return rows


def _rref_inplace(field: Field, rows: list[list[int]], ncols: int) -> list[int]:
    """Reduce ``rows`` to reduced row-echelon form; drop zero rows; return pivots."""
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            c = rows[i][col]
            if i != r and c:
                rows[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    del rows[r:]
    return pivots


def rref(field: Field, vectors: Iterable[Sequence[int]], ncols: int | None = None) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row-echelon basis of the span of ``vectors`` and its pivot columns."""
    rows = _rows(field, vectors, ncols)
    if not rows:
        return (), ()
    pivots = _rref_inplace(field, rows, len(rows[0]) if ncols is None else ncols)
    return tuple(tuple(r) for r in rows), tuple(pivots)


def rank(field: Field, matrix: Iterable[Sequence[int]]) -> int:
    return len(rref(field, matrix)[0])


def nullspace(field: Field, vectors: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of {x : <row, x> = 0 for every row}."""
    basis, pivots = rref(field, vectors, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(basis, pivots):
            x[pc] = field.neg(row[f])
        out.append(tuple(x))
    return out


def vec_add(field: Field, u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_scale(field: Field, c: int, v: Sequence[int]) -> Vector:
    return tuple(field.mul(c, a) for a in v)


def vector_index(field: Field, v: Sequence[int]) -> int:
    idx = 0
    for c in v:
        if not 0 <= c < field.q:
            raise IndexOutOfRange(f"element code {c} outside [0, {field.q})")
        idx = idx * field.q + c
    return idx


def index_vector(field: Field, d: int, idx: int) -> Vector:
    q = field.q
    if not 0 <= idx < q**d:
        raise IndexOutOfRange(f"index {idx} outside [0, {q}^{d})")
    out = [0] * d
    for t in range(d - 1, -1, -1):
        idx, out[t] = divmod(idx, q)
    return tuple(out)


def all_vectors(field: Field, d: int) -> Iterable[Vector]:
    """Every vector of F_q^d in index order."""
    return itertools.product(range(field.q), repeat=d)


@dataclass(frozen=True)
class Subspace:
    field: Field
    ambient_dim: int
    basis: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Zero out the pivot coordinates of ``v`` using the basis.

        The result is the index-smallest point of the coset v + self.
        """
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        f = self.field
        x = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = x[pc]
            if c:
                x = [f.sub(a, f.mul(c, b)) for a, b in zip(x, row)]
        return tuple(x)

    def points(self) -> list[Vector]:
        """All q**dim members, sorted by vector index."""
        f = self.field
        zero = (0,) * self.ambient_dim
        pts = []
        for coeffs in itertools.product(range(f.q), repeat=self.dim):
            v = zero
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = vec_add(f, v, vec_scale(f, c, row))
            pts.append(v)
        pts.sort()
        return pts


def subspace_from_span(field: Field, vectors: Iterable[Sequence[int]], ambient_dim: int | None = None) -> Subspace:
    vectors = list(vectors)
    if ambient_dim is None:
        if not vectors:
            raise DimensionMismatch("ambient dimension unknown for an empty span")
        ambient_dim = len(vectors[0])
    basis, pivots = rref(field, vectors, ambient_dim)
    return Subspace(field, ambient_dim, basis, pivots)


def zero_subspace(field: Field, ambient_dim: int) -> Subspace:
    return Subspace(field, ambient_dim, (), ())


def _same_space(a: Subspace, b: Subspace) -> None:
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")


def span_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_space(a, b)
    return subspace_from_span(a.field, a.basis + b.basis, a.ambient_dim)


def orthogonal(s: Subspace) -> Subspace:
    return subspace_from_span(s.field, nullspace(s.field, s.basis, s.ambient_dim), s.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    # a ∩ b = (a⊥ + b⊥)⊥
    _same_space(a, b)
    d = a.ambient_dim
    dual = nullspace(a.field, a.basis, d) + nullspace(b.field, b.basis, d)
    return subspace_from_span(a.field, nullspace(a.field, dual, d), d)


def contains(s: Subspace, v: Sequence[int]) -> bool:
    return not any(s.reduce(v))


@dataclass(frozen=True)
class AffineSubspace:
    direction: Subspace
    shift: Vector

    @classmethod
    def through(cls, direction: Subspace, point: Sequence[int]) -> AffineSubspace:
        """The coset point + direction, with its canonical (smallest) shift."""
        return cls(direction, direction.reduce(point))

    def points(self) -> list[Vector]:
        f = self.direction.field
        return sorted(vec_add(f, self.shift, u) for u in self.direction.points())


def enumerate_coset(a: AffineSubspace) -> list[Vector]:
    return a.points()


def cosets_of(s: Subspace) -> list[AffineSubspace]:
    """All cosets of ``s``, sorted by canonical shift.

    Canonical shifts are exactly the vectors vanishing on the pivot columns.
    """
    d = s.ambient_dim
    free = [c for c in range(d) if c not in s.pivots]
    out = []
    for vals in itertools.product(range(s.field.q), repeat=len(free)):
        v = [0] * d
        for c, x in zip(free, vals):
            v[c] = x
        out.append(AffineSubspace(s, tuple(v)))
    return out
