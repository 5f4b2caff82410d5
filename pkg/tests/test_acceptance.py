"""Exit criteria. Each test prints one PASS/FAIL line (also collected in the terminal summary)."""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from ffdist.counting import (
    PointSet,
    count_n_zero,
    count_vr_bruteforce,
    count_vr_fast,
    energy_identity_check,
    quotient_set,
)
from ffdist.field import QuadraticExtension, construct_field, field_of_order, is_prime
from ffdist.harness import (
    DEFAULT_SEED,
    gen_random_pointset,
    gen_subfield_example,
    verify_bhowmik,
    verify_main_theorem,
    verify_quotient_coverage,
    verify_sharpness,
)
from ffdist.linalg import (
    all_vectors,
    brute_force_O2,
    build_similarity_even,
    build_similarity_odd,
    enumerate_O2,
    is_similarity,
    sum_of_two_squares,
    transporter_counts,
    vector_norms,
)

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(number, title, budget_s):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_s, f"took {elapsed:.1f}s, budget {budget_s}s"
        status = "PASS"
    finally:
        line = f"[{status}] criterion {number:>2}: {title} ({time.perf_counter() - start:.2f}s / {budget_s}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_c01_energy_identity():
    with criterion(1, "energy identity exact, q in {3,7,11}, 50 sets each, all r", 120):
        for q in (3, 7, 11):
            f = field_of_order(q)
            sizes = list(range(2, min(q, 12) + 1))
            for i in range(50):
                E = gen_random_pointset(f, 2, sizes[i % len(sizes)], (DEFAULT_SEED, q, i))
                for r in range(1, q):
                    rep = energy_identity_check(E, r, method="brute")
                    assert rep.details["residual"] == 0, rep.to_json()


def test_c02_main_theorem():
    with criterion(2, "4q V(r) >= |E|^4 at |E| = ceil(sqrt2 q), q in {7,11,19}, 100 trials", 300):
        for q, size in ((7, 10), (11, 16), (19, 27)):
            rep = verify_main_theorem(q, trials=100, seed=DEFAULT_SEED)
            assert rep.params["size"] == size
            assert rep.passed, rep.to_json()
            d = rep.details
            print(f"    q={q}: min V={rep.min_observed}, bound={rep.bound}; "
                  f"2q bound held in {d['abstract_2q_trials_held']}/100, "
                  f"(q+1)/4q^2 bound held in {d['proof_qplus1_trials_held']}/100")


def test_c03_sharpness():
    with criterion(3, "subfield example |E| = q, |Delta(E)| = p for p = 3, 5", 1):
        for p in (3, 5):
            rep = verify_sharpness(p)
            assert rep.params["size"] == p * p == rep.params["q"]
            assert rep.details["delta_size"] == p
            assert rep.passed


def test_c04_group_and_sphere_cardinalities():
    with criterion(4, "|O(2,q)| = 2(q+1), spheres of size q+1 and {0}", 30):
        for q in (3, 7, 11, 19, 23):
            f = field_of_order(q)
            group = enumerate_O2(f)
            assert len(group) == 2 * (q + 1)
            if q <= 11:
                assert set(group.elements) == set(brute_force_O2(f))
            vecs = all_vectors(f, 2)
            sizes = np.bincount(vector_norms(f, vecs), minlength=q)
            assert sizes[0] == 1 and (sizes[1:] == q + 1).all()
            zero_sphere = vecs[vector_norms(f, vecs) == 0]
            assert zero_sphere.tolist() == [[0, 0]]


def test_c05_stabilizer():
    with criterion(5, "exactly 2 elements of O(2) carry u to v on a common sphere", 60):
        for q in (3, 7, 11, 19):
            f = field_of_order(q)
            counts = transporter_counts(enumerate_O2(f))
            vecs = all_vectors(f, 2)[1:]
            sizes = np.bincount(vector_norms(f, vecs), minlength=q)
            # every same-sphere ordered pair appears, and each with count 2
            assert len(counts) == int((sizes.astype(object) ** 2).sum())
            assert set(counts.values()) == {2}
            for u, v in counts:
                nu = f.add(f.mul(u // q, u // q), f.mul(u % q, u % q))
                nv = f.add(f.mul(v // q, v // q), f.mul(v % q, v % q))
                assert nu == nv


def test_c06_sum_of_two_squares():
    qs = [p for p in range(3, 200) if is_prime(p)] + [9, 27, 81, 25, 125, 49, 121, 169]
    with criterion(6, f"a^2 + b^2 = r for every r, {len(qs)} odd prime powers q <= 199", 30):
        for q in qs:
            f = field_of_order(q)
            for r in range(q):
                a, b = sum_of_two_squares(f, r)
                assert f.add(f.mul(a.value, a.value), f.mul(b.value, b.value)) == r


def test_c07_similarity_construction():
    with criterion(7, "B^T B = rI and ||Bv||^2 = r||v||^2 (d=2,4), odd d=3 over F_{q^2}", 60):
        rng = np.random.default_rng(DEFAULT_SEED)
        for q in (3, 7, 11):
            f = field_of_order(q)
            ext = QuadraticExtension(f)
            plane = all_vectors(f, 2)
            plane_norms = vector_norms(f, plane)
            sample4 = rng.integers(0, q, size=(1000, 4))
            norms4 = vector_norms(f, sample4)
            for r in range(1, q):
                B2 = build_similarity_even(f, 2, r).matrix
                assert is_similarity(B2, r)
                assert (vector_norms(f, B2.apply_many(plane)) == f.vmul(r, plane_norms)).all()
                B4 = build_similarity_even(f, 4, r).matrix
                assert is_similarity(B4, r)
                assert (vector_norms(f, B4.apply_many(sample4)) == f.vmul(r, norms4)).all()
                B3 = build_similarity_odd(ext, 3, r).matrix
                assert is_similarity(B3, ext.embed(r).value)


def test_c08_oracle_equivalence():
    with criterion(8, "count_vr_fast == count_vr_bruteforce on 200 instances, all r", 60):
        rng = np.random.default_rng(DEFAULT_SEED)
        for i in range(200):
            q = int(rng.choice([3, 5, 7, 9, 11]))
            f = field_of_order(q)
            size = int(rng.integers(1, min(12, q * q) + 1))
            E = gen_random_pointset(f, 2, size, (DEFAULT_SEED, i))
            for r in range(q):
                assert count_vr_fast(E, r) == count_vr_bruteforce(E, r)


def test_c09_similar_configurations():
    with criterion(9, "finder succeeds with valid configurations at the hypothesis size", 120):
        for k in (1, 2):
            rep = verify_bhowmik(7, 2, k, r=None, trials=20, seed=DEFAULT_SEED)
            assert rep.params["size"] == 2 * k * 7
            assert rep.passed and rep.flags["averaging_bound"], rep.to_json()
            assert rep.details["found"] == 6 * 20
        rep = verify_bhowmik(3, 3, 1, r=2, trials=20, seed=DEFAULT_SEED)
        assert rep.params["size"] == 18
        assert rep.passed and rep.flags["averaging_bound"] and rep.details["found"] == 20


def test_c10_n_zero_dichotomy():
    with criterion(10, "N0 = 0 for q in {7,11}; q=5 witness gives N0 = 4", 10):
        rng = np.random.default_rng(DEFAULT_SEED)
        for i in range(100):
            q = (7, 11)[i % 2]
            f = field_of_order(q)
            E = gen_random_pointset(f, 2, int(rng.integers(1, q * q + 1)), (DEFAULT_SEED, i))
            r = int(rng.integers(1, q))
            assert count_n_zero(E, r) == 0
        witness = PointSet(construct_field(5), 2, [(0, 0), (1, 2)])
        assert count_n_zero(witness, 1) == 4


def test_c11_quotient_coverage():
    with criterion(11, "Delta/Delta = F_11 at |E| = 99; q=9 subfield set fails coverage", 30):
        f = construct_field(11)
        for i in range(20):
            rep = verify_quotient_coverage(gen_random_pointset(f, 2, 99, (DEFAULT_SEED, i)))
            assert rep.params["hypothesis_met"] and rep.passed, rep.to_json()
        E = gen_subfield_example(3)
        rep = verify_quotient_coverage(E)
        assert len(E) == 9 and not rep.params["hypothesis_met"] and not rep.passed
        ext = QuadraticExtension(construct_field(3))
        assert quotient_set(E) <= set(ext.embed_map)
