import itertools

import numpy as np
import pytest

from ffdist.field import FieldError, build_quadratic_extension, construct_field, field_of_order
from ffdist.linalg import (
    SquareMatrix,
    all_vectors,
    brute_force_O2,
    build_similarity_even,
    build_similarity_odd,
    enumerate_O2,
    is_orthogonal,
    is_similarity,
    norm_sq,
    point,
    sphere_points,
    sum_of_two_squares,
    transporter_counts,
    vector_norms,
)
from ffdist.serialize import matrix_from_json

F3, F5, F7 = construct_field(3), construct_field(5), construct_field(7)


def test_norm_sq_examples():
    assert norm_sq(point(F7, 1, 2)) == 5
    assert norm_sq(point(F7, 0, 0, 0)) == 0
    assert norm_sq(point(F5, 1, 2)) == 0


def test_is_orthogonal_examples():
    assert is_orthogonal(SquareMatrix.identity(F7, 3))
    assert not is_orthogonal(SquareMatrix.from_rows(F7, [[1, -3], [3, 1]]))
    assert is_orthogonal(SquareMatrix.from_rows(F7, [[0, -1], [1, 0]]))


def test_sum_of_two_squares_examples():
    assert sum_of_two_squares(F7, 3) == (F7(1), F7(3))
    assert sum_of_two_squares(F7, 0) == (F7(0), F7(0))
    assert sum_of_two_squares(F7, 1) == (F7(0), F7(1))


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 25, 27])
def test_sum_of_two_squares_is_first_solution(q):
    f = field_of_order(q)
    for r in range(f.q):
        a, b = sum_of_two_squares(f, r)
        # oracle: scan all pairs, first a that admits any b
        first_a = next(x for x in range(f.q) if any(f.add(f.mul(x, x), f.mul(y, y)) == r for y in range(f.q)))
        assert a.value == first_a
        assert a * a + b * b == r
        assert b.value == min(b.value, (-b).value)


def test_similarity_even_examples():
    sim = build_similarity_even(F7, 2, 3)
    assert sim.matrix.entries == ((1, 4), (3, 1))
    assert is_similarity(sim.matrix, 3)
    assert build_similarity_even(F7, 2, 1).matrix.entries == ((0, 6), (1, 0))
    assert is_orthogonal(build_similarity_even(F7, 2, 1).matrix)
    big = build_similarity_even(F7, 4, 3).matrix
    assert big.entries[:2] == ((1, 4, 0, 0), (3, 1, 0, 0))
    assert big.entries[2:] == ((0, 0, 1, 4), (0, 0, 3, 1))
    assert is_similarity(big, 3)


@pytest.mark.parametrize("d,r", [(3, 3), (2, 0)])
def test_similarity_even_rejects(d, r):
    with pytest.raises(FieldError):
        build_similarity_even(F7, d, r)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_similarity_scales_every_norm(q):
    f = field_of_order(q)
    vecs = all_vectors(f, 2)
    norms = vector_norms(f, vecs)
    for r in range(1, f.q):
        B = build_similarity_even(f, 2, r).matrix
        assert (vector_norms(f, B.apply_many(vecs)) == f.vmul(r, norms)).all()


def test_similarity_odd_nonsquare_ratio():
    ext = build_quadratic_extension(F3)
    sim = build_similarity_odd(ext, 3, 2)
    last = sim.matrix.element(2, 2)
    assert ext.restrict(last) is None
    assert last * last == ext.embed(2)
    assert is_similarity(sim.matrix, ext.embed(2).value)
    assert not sim.base_valued


def test_similarity_odd_square_ratio():
    ext = build_quadratic_extension(F7)
    sim = build_similarity_odd(ext, 3, 2)
    assert ext.restrict(sim.matrix.element(2, 2)) in (F7(3), F7(4))
    assert sim.base_valued


@pytest.mark.parametrize("q", [3, 7, 9])
def test_similarity_odd_ratio_one_is_orthogonal(q):
    ext = build_quadratic_extension(field_of_order(q))
    assert is_orthogonal(build_similarity_odd(ext, 3, 1).matrix)
    assert is_orthogonal(build_similarity_odd(ext, 5, 1).matrix)


@pytest.mark.parametrize("d,r", [(4, 1), (1, 1), (3, 0)])
def test_similarity_odd_rejects(d, r):
    with pytest.raises(FieldError):
        build_similarity_odd(build_quadratic_extension(F7), d, r)


def test_o2_examples():
    g3 = enumerate_O2(F3)
    assert len(g3) == 8 and len(g3.rotation_subgroup) == 4
    assert len(enumerate_O2(F7)) == 16
    assert len(enumerate_O2(F5)) == 8


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_o2_matches_brute_force(q):
    f = field_of_order(q)
    group = enumerate_O2(f)
    assert set(group.elements) == set(brute_force_O2(f))
    assert len(set(group.elements)) == len(group.elements)
    assert all(m.det() == 1 for m in group.rotation_subgroup)
    assert all(m.det() == f.neg(1) for m in group.elements[len(group.rotation_subgroup):])


@pytest.mark.parametrize("q", [3, 7, 11, 19, 23, 27, 31])
def test_o2_order_q_3_mod_4(q):
    group = enumerate_O2(field_of_order(q))
    assert len(group) == 2 * (q + 1)
    assert len(group.rotation_subgroup) == q + 1


@pytest.mark.parametrize("q", [3, 7, 9, 11, 19])
def test_o2_closure(q):
    f = field_of_order(q)
    group = enumerate_O2(f)
    members = set(group.elements)
    for a in group.elements:
        assert a.transpose() in members  # inverse of an orthogonal matrix
        for b in group.elements:
            assert a @ b in members


def test_o2_size_guard():
    with pytest.raises(FieldError):
        enumerate_O2(construct_field(1031))


def test_sphere_examples():
    assert {p.coords for p in sphere_points(F3, 2, 1)} == {(1, 0), (2, 0), (0, 1), (0, 2)}
    assert [p.coords for p in sphere_points(F3, 2, 0)] == [(0, 0)]
    assert len(sphere_points(F5, 2, 0)) == 9


@pytest.mark.parametrize("q", [3, 7, 11, 19, 23])
def test_sphere_sizes_q_3_mod_4(q):
    f = field_of_order(q)
    norms = vector_norms(f, all_vectors(f, 2))
    sizes = np.bincount(norms, minlength=q)
    assert sizes[0] == 1
    assert (sizes[1:] == q + 1).all()


def test_sphere_guard():
    with pytest.raises(FieldError):
        sphere_points(construct_field(101), 4, 0)


@pytest.mark.parametrize("q", [3, 7, 11])
def test_stabilizer_is_order_two(q):
    f = field_of_order(q)
    counts = transporter_counts(enumerate_O2(f))
    vecs = all_vectors(f, 2)[1:]
    norms = vector_norms(f, vecs).tolist()
    codes = (vecs[:, 0] * q + vecs[:, 1]).tolist()
    by_norm = {}
    for c, t in zip(codes, norms):
        by_norm.setdefault(t, []).append(c)
    expected = {(u, v) for group in by_norm.values() for u, v in itertools.product(group, repeat=2)}
    assert set(counts) == expected
    assert set(counts.values()) == {2}


def test_matrix_json_roundtrip():
    m = build_similarity_even(construct_field(3, 2), 2, 5).matrix
    assert matrix_from_json(m.to_json()) == m
