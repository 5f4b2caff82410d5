"""Vectors, matrices and the quadratic norm over a finite field.

Points and matrices hold raw element indices together with their field;
use ``Point.elements()`` / ``SquareMatrix.element(i, j)`` to get
FieldElement views.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

import numpy as np

from .field import FieldDescriptor, FieldElement, FieldError, QuadraticExtension


@dataclass(frozen=True)
class Point:
    field: FieldDescriptor
    coords: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.coords)

    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(c, self.field) for c in self.coords)

    def __sub__(self, other: "Point") -> "Point":
        f = self.field
        return Point(f, tuple(f.sub(a, b) for a, b in zip(self.coords, other.coords)))

    def __add__(self, other: "Point") -> "Point":
        f = self.field
        return Point(f, tuple(f.add(a, b) for a, b in zip(self.coords, other.coords)))

    def to_json(self) -> list:
        return [self.field.encode(c) for c in self.coords]


def point(f: FieldDescriptor, *coords) -> Point:
    return Point(f, tuple(f(c).value for c in coords))


def norm_sq_coords(f: FieldDescriptor, coords) -> int:
    acc = 0
    for c in coords:
        acc = f.add(acc, f.mul(c, c))
    return acc


def norm_sq(v: Point) -> FieldElement:
    """Sum of squared coordinates."""
    return FieldElement(norm_sq_coords(v.field, v.coords), v.field)


@dataclass(frozen=True)
class SquareMatrix:
    field: FieldDescriptor
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, f: FieldDescriptor, rows) -> "SquareMatrix":
        entries = tuple(tuple(f(x).value for x in row) for row in rows)
        if any(len(row) != len(entries) for row in entries):
            raise ValueError("matrix is not square")
        return cls(f, entries)

    @classmethod
    def identity(cls, f: FieldDescriptor, d: int) -> "SquareMatrix":
        return cls(f, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def scalar(cls, f: FieldDescriptor, d: int, s: int) -> "SquareMatrix":
        return cls(f, tuple(tuple(s if i == j else 0 for j in range(d)) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.entries)

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.entries[i][j], self.field)

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(self.field, tuple(zip(*self.entries)))

    def __matmul__(self, other):
        f = self.field
        if isinstance(other, Point):
            return Point(f, self.apply(other.coords))
        cols = list(zip(*other.entries))
        rows = []
        for row in self.entries:
            out = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    acc = f.add(acc, f.mul(a, b))
                out.append(acc)
            rows.append(tuple(out))
        return SquareMatrix(f, tuple(rows))

    def apply(self, coords) -> tuple[int, ...]:
        f = self.field
        out = []
        for row in self.entries:
            acc = 0
            for a, c in zip(row, coords):
                acc = f.add(acc, f.mul(a, c))
            out.append(acc)
        return tuple(out)

    def apply_many(self, coords: np.ndarray) -> np.ndarray:
        """Apply to each row of an (m, d) index array."""
        f = self.field
        coords = np.asarray(coords, dtype=np.int64)
        out = np.zeros_like(coords)
        for i, row in enumerate(self.entries):
            acc = np.zeros(coords.shape[0], dtype=np.int64)
            for j, a in enumerate(row):
                if a:
                    acc = f.vadd(acc, f.vmul(a, coords[:, j]))
            out[:, i] = acc
        return out

    def det(self) -> int:
        if self.d != 2:
            raise NotImplementedError("determinant only needed for 2x2")
        f = self.field
        (a, b), (c, d) = self.entries
        return f.sub(f.mul(a, d), f.mul(b, c))

    def to_json(self) -> dict:
        enc = self.field.encode
        return {
            "field": self.field.to_json(),
            "d": self.d,
            "entries": [[enc(x) for x in row] for row in self.entries],
        }


def is_orthogonal(m: SquareMatrix) -> bool:
    return m.transpose() @ m == SquareMatrix.identity(m.field, m.d)


def is_similarity(m: SquareMatrix, r: int) -> bool:
    """True iff M^T M = r I."""
    return m.transpose() @ m == SquareMatrix.scalar(m.field, m.d, r)


def sum_of_two_squares(f: FieldDescriptor, r: FieldElement | int) -> tuple[FieldElement, FieldElement]:
    """(a, b) with a^2 + b^2 = r: smallest a such that r - a^2 is a square, b its canonical root."""
    rv = f(r).value
    for a in range(f.q):
        rest = f.sub(rv, f.mul(a, a))
        if f.is_square(rest):
            return FieldElement(a, f), FieldElement(f.sqrt(rest), f)
    raise AssertionError(f"no representation of {rv} as a sum of two squares in {f!r}")


@dataclass(frozen=True)
class SimilarityMatrix:
    """B with B^T B = ratio * I, built from a witness a^2 + b^2 = ratio."""

    matrix: SquareMatrix
    ratio: FieldElement
    witness: tuple[FieldElement, FieldElement]
    base_valued: bool = True


def _rotation_blocks(f: FieldDescriptor, blocks: int, a: int, b: int, size: int) -> list[list[int]]:
    rows = [[0] * size for _ in range(size)]
    nb = f.neg(b)
    for k in range(blocks):
        i = 2 * k
        rows[i][i], rows[i][i + 1] = a, nb
        rows[i + 1][i], rows[i + 1][i + 1] = b, a
    return rows


def build_similarity_even(f: FieldDescriptor, d: int, r: FieldElement | int) -> SimilarityMatrix:
    if d < 2 or d % 2:
        raise FieldError(f"even similarity needs an even dimension >= 2, got {d}")
    r = f(r)
    if not r:
        raise FieldError("ratio must be nonzero")
    a, b = sum_of_two_squares(f, r)
    rows = _rotation_blocks(f, d // 2, a.value, b.value, d)
    m = SquareMatrix(f, tuple(tuple(row) for row in rows))
    if not is_similarity(m, r.value):
        raise AssertionError(f"B^T B != rI for r={r!r}")
    return SimilarityMatrix(m, r, (a, b), True)


def build_similarity_odd(ext: QuadraticExtension, d: int, r: FieldElement | int) -> SimilarityMatrix:
    """Block rotation matrix with a trailing sqrt(r) entry, over F_{q^2}."""
    if d < 3 or d % 2 == 0:
        raise FieldError(f"odd similarity needs an odd dimension >= 3, got {d}")
    base, big = ext.base, ext.ext
    r = base(r)
    if not r:
        raise FieldError("ratio must be nonzero")
    a, b = sum_of_two_squares(base, r)
    rows = _rotation_blocks(big, (d - 1) // 2, ext.embed(a).value, ext.embed(b).value, d)
    root = ext.sqrt(r)
    rows[d - 1][d - 1] = root.value
    m = SquareMatrix(big, tuple(tuple(row) for row in rows))
    if not is_similarity(m, ext.embed(r).value):
        raise AssertionError(f"B^T B != rI for r={r!r}")
    return SimilarityMatrix(m, r, (a, b), base.is_square(r.value))


@dataclass(frozen=True)
class OrthogonalGroup2:
    field: FieldDescriptor
    elements: tuple[SquareMatrix, ...]
    rotation_subgroup: tuple[SquareMatrix, ...]

    def __len__(self):
        return len(self.elements)


O2_LIMIT = 2**10


def circle_points(f: FieldDescriptor) -> list[tuple[int, int]]:
    """Solutions of a^2 + b^2 = 1, in field enumeration order."""
    sq = [f.mul(x, x) for x in range(f.q)]
    out = []
    for a in range(f.q):
        rest = f.sub(1, sq[a])
        if f.is_square(rest):
            b = f.sqrt(rest)
            out.extend((a, y) for y in sorted({b, f.neg(b)}))
    return out


def enumerate_O2(f: FieldDescriptor) -> OrthogonalGroup2:
    """Rotations [[a,-b],[b,a]] then reflections [[a,b],[b,-a]] over the unit circle."""
    if f.q > O2_LIMIT:
        raise FieldError(f"O(2) enumeration is limited to q <= {O2_LIMIT}")
    circle = circle_points(f)
    rots = tuple(SquareMatrix(f, ((a, f.neg(b)), (b, a))) for a, b in circle)
    refl = tuple(SquareMatrix(f, ((a, b), (b, f.neg(a)))) for a, b in circle)
    return OrthogonalGroup2(f, rots + refl, rots)


def brute_force_O2(f: FieldDescriptor) -> list[SquareMatrix]:
    """Every 2x2 matrix with M^T M = I, by scanning all q^4 matrices."""
    out = []
    for a, b, c, d in product(range(f.q), repeat=4):
        m = SquareMatrix(f, ((a, b), (c, d)))
        if is_orthogonal(m):
            out.append(m)
    return out


SPHERE_LIMIT = 2**22


def all_vectors(f: FieldDescriptor, d: int) -> np.ndarray:
    """All of F_q^d as an (q^d, d) index array, first coordinate most significant."""
    if f.q**d > SPHERE_LIMIT:
        raise FieldError(f"q^d = {f.q}^{d} exceeds the enumeration bound {SPHERE_LIMIT}")
    grids = np.indices((f.q,) * d).reshape(d, -1).T
    return grids.astype(np.int64)


def vector_norms(f: FieldDescriptor, vecs: np.ndarray) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    acc = np.zeros(vecs.shape[:-1], dtype=np.int64)
    for j in range(vecs.shape[-1]):
        acc = f.vadd(acc, f.vmul(vecs[..., j], vecs[..., j]))
    return acc


def sphere_points(f: FieldDescriptor, d: int, t: FieldElement | int) -> list[Point]:
    t = f(t).value
    vecs = all_vectors(f, d)
    hits = vecs[vector_norms(f, vecs) == t]
    return [Point(f, tuple(int(c) for c in row)) for row in hits]


def transporter_counts(group: OrthogonalGroup2) -> Counter:
    """(u, v) -> #{theta : theta u = v} over all nonzero u in F_q^2."""
    f = group.field
    vecs = all_vectors(f, 2)[1:]
    counts: Counter = Counter()
    q = f.q
    src = vecs[:, 0] * q + vecs[:, 1]
    for theta in group.elements:
        img = theta.apply_many(vecs)
        counts.update(zip(src.tolist(), (img[:, 0] * q + img[:, 1]).tolist()))
    return counts
