"""Point-set generators and theorem-level verifiers.

All bound comparisons are done on integers (or Fractions); nothing here
touches floating point.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .counting import (
    PointSet,
    count_vr_bruteforce,
    distance_histogram,
    distance_set,
    quotient_set,
    vr_from_histogram,
)
from .field import (
    FieldDescriptor,
    FieldElement,
    FieldError,
    QuadraticExtension,
    construct_field,
    field_of_order,
    is_prime,
)
from .linalg import (
    Point,
    SimilarityMatrix,
    build_similarity_even,
    build_similarity_odd,
    norm_sq,
)
from .report import VerificationReport

DEFAULT_SEED = 20231016


class HypothesisError(ValueError):
    """A theorem's size hypothesis cannot be met with the requested parameters."""


class ConfigurationNotFound(LookupError):
    def __init__(self, best_multiplicity: int, needed: int):
        super().__init__(f"best translation multiplicity {best_multiplicity} < {needed}")
        self.best_multiplicity = best_multiplicity
        self.needed = needed


def _elapsed(start: float) -> int:
    return int((time.perf_counter() - start) * 1000)


def _decode_vectors(q: int, d: int, idx: np.ndarray) -> np.ndarray:
    out = np.empty((len(idx), d), dtype=np.int64)
    for j in range(d - 1, -1, -1):
        out[:, j] = idx % q
        idx = idx // q
    return out


def gen_random_pointset(f: FieldDescriptor, d: int, size: int, seed) -> PointSet:
    """Uniform sample of ``size`` distinct points, sorted in enumeration order."""
    total = f.q**d
    if not 1 <= size <= total:
        raise ValueError(f"cannot draw {size} distinct points from F_{f.q}^{d} ({total} points)")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(total, size=size, replace=False))
    return PointSet(f, d, _decode_vectors(f.q, d, idx).tolist())


def gen_subfield_example(p: int) -> PointSet:
    """E = F_p^2 sitting inside F_{p^2}^2: |E| = q but only p distances."""
    if not is_prime(p) or p == 2:
        raise FieldError(f"{p} is not an odd prime")
    if p**4 > 2**20:
        raise FieldError(f"F_{p}^2 inside F_{p * p}^2 exceeds the enumeration bound")
    ext = QuadraticExtension(construct_field(p))
    emb = ext.embed_map
    return PointSet(ext.ext, 2, [(emb[a], emb[b]) for a in range(p) for b in range(p)])


def verify_sharpness(p: int) -> VerificationReport:
    start = time.perf_counter()
    E = gen_subfield_example(p)
    f = E.field
    dist = distance_set(E)
    ext = QuadraticExtension(construct_field(p))
    in_subfield = all(ext.restrict(t) is not None for t in dist)
    ok = len(E) == f.q and len(dist) == p
    return VerificationReport(
        theorem="sharpness",
        params={"p": p, "q": f.q, "d": 2, "size": len(E)},
        passed=ok,
        bound=None,
        min_observed=len(dist),
        max_observed=len(dist),
        flags={"distances_in_subfield": in_subfield},
        witness=None if ok else E.to_json(),
        details={"distance_set": sorted(f.encode(t) for t in dist), "delta_size": len(dist)},
        elapsed_ms=_elapsed(start),
    )


def main_theorem_size(q: int) -> int:
    """Smallest integer n with n >= sqrt(2) q."""
    return math.isqrt(2 * q * q - 1) + 1


def _main_trial(f: FieldDescriptor, size: int, seed, crosscheck: bool) -> dict:
    E = gen_random_pointset(f, 2, size, seed)
    hist = distance_histogram(E)
    q, n4 = f.q, size**4
    vs = {r: vr_from_histogram(f, hist.mult, r) for r in range(1, q)}
    if crosscheck:
        for r, v in vs.items():
            if count_vr_bruteforce(E, r) != v:
                raise AssertionError(f"fast and brute-force V({r}) disagree")
    fails = [r for r, v in vs.items() if 4 * q * v < n4]
    return {
        "min": min(vs.values()),
        "max": max(vs.values()),
        "fails": fails,
        "abstract_2q": all(2 * q * v >= n4 for v in vs.values()),
        "proof_qplus1": all(4 * q * q * v >= (q + 1) * n4 for v in vs.values()),
        "witness": E.to_json() if fails else None,
    }


def verify_main_theorem(
    q: int,
    trials: int = 100,
    seed: int = DEFAULT_SEED,
    size: int | None = None,
    crosscheck: int = 2,
    workers: int = 1,
) -> VerificationReport:
    """Check 4q V(r) >= |E|^4 for all nonzero r on random E in F_q^2 with |E| >= sqrt(2) q.

    The abstract's |E|^4/(2q) and the proof's (q+1)|E|^4/(4q^2) are tallied
    as informational flags only.
    """
    start = time.perf_counter()
    f = field_of_order(q)
    if q % 4 != 3:
        raise FieldError(f"q = {q} is not 3 mod 4")
    if size is None:
        size = main_theorem_size(q)
    if size > q * q:
        raise HypothesisError(f"|E| = {size} exceeds q^2 = {q * q}")
    hypothesis = size * size >= 2 * q * q
    # the quartic oracle is too slow beyond ~10^6 quadruples per r
    do_cross = size**4 <= 10**6
    args = [(f, size, (seed, t), do_cross and t < crosscheck) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_main_trial, *zip(*args)))
    else:
        results = [_main_trial(*a) for a in args]
    failing = [(t, res) for t, res in enumerate(results) if res["fails"]]
    witness = None
    if failing:
        t, res = failing[0]
        witness = {"trial": t, "r": res["fails"], "pointset": res["witness"]}
    abstract_hits = sum(res["abstract_2q"] for res in results)
    proof_hits = sum(res["proof_qplus1"] for res in results)
    return VerificationReport(
        theorem="main_result",
        params={"q": q, "d": 2, "size": size, "r": "all nonzero", "trials": trials, "seed": seed,
                "hypothesis_met": hypothesis},
        passed=not failing,
        bound=Fraction(size**4, 4 * q),
        min_observed=min(res["min"] for res in results),
        max_observed=max(res["max"] for res in results),
        flags={"abstract_2q": abstract_hits == trials, "proof_qplus1": proof_hits == trials},
        witness=witness,
        details={
            "abstract_2q_bound": str(Fraction(size**4, 2 * q)),
            "abstract_2q_trials_held": abstract_hits,
            "proof_qplus1_bound": str(Fraction((q + 1) * size**4, 4 * q * q)),
            "proof_qplus1_trials_held": proof_hits,
            "failing_trials": len(failing),
            "crosschecked_trials": min(crosscheck, trials) if do_cross else 0,
        },
        elapsed_ms=_elapsed(start),
    )


def verify_quotient_coverage(E: PointSet) -> VerificationReport:
    """Does Delta(E)/Delta(E) cover F_q (d even) or the squares of F_q (d odd)?

    The hypothesis |E| >= 9 q^{d/2} (d even) or |E| >= 6 q^{d/2} (d odd) is
    recorded, but coverage is checked either way.
    """
    start = time.perf_counter()
    f, d, n = E.field, E.d, len(E)
    if d % 2 == 0:
        target = set(range(f.q))
        hypothesis = n * n >= 81 * f.q**d
        reading = "full field"
    else:
        target = set(f.squares)
        hypothesis = n * n >= 36 * f.q**d
        reading = "squares of F_q (interpretation of the odd-d statement)"
    quot = quotient_set(E)
    missing = sorted(target - quot)
    return VerificationReport(
        theorem="quotient_coverage",
        params={"field": f.to_json(), "d": d, "size": n, "hypothesis_met": hypothesis, "target": reading},
        passed=not missing,
        bound=None,
        min_observed=len(quot),
        max_observed=len(quot),
        flags={"hypothesis_met": hypothesis},
        witness=None if not missing else E.to_json(),
        details={"missing": [f.encode(t) for t in missing], "quotient_size": len(quot)},
        elapsed_ms=_elapsed(start),
    )


@dataclass
class SimilarConfiguration:
    """Points xs, ys of E with ||ys_i - ys_j||^2 = r ||xs_i - xs_j||^2, and ys_i = B xs_i - a."""

    k: int
    pairs: tuple[tuple[int, int], ...]
    ratio: FieldElement
    xs: tuple[Point, ...]
    ys: tuple[Point, ...]
    translation: Point
    similarity: SimilarityMatrix
    multiplicity: int
    translation_count: int
    set_size: int

    @property
    def averaging_ok(self) -> bool:
        # pigeonhole over all admissible translations
        return self.multiplicity * self.translation_count >= self.set_size**2

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "pairs": [list(pq) for pq in self.pairs],
            "r": self.xs[0].field.encode(self.ratio.value),
            "xs": [x.to_json() for x in self.xs],
            "ys": [y.to_json() for y in self.ys],
            "translation": self.translation.to_json(),
            "matrix": self.similarity.matrix.to_json(),
            "multiplicity": self.multiplicity,
        }


def all_pairs(k: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(1, k + 2) for j in range(i + 1, k + 2))


def parse_pairs(text: str) -> tuple[tuple[int, int], ...]:
    """'1-2,2-3' -> ((1, 2), (2, 3))."""
    out = []
    for item in text.split(","):
        i, j = (int(s) for s in item.strip().split("-"))
        out.append((i, j))
    return tuple(out)


def _check_pairs(k: int, pairs: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    pairs = tuple((int(i), int(j)) for i, j in pairs)
    if not pairs:
        raise ValueError("pair set must be nonempty")
    for i, j in pairs:
        if not 1 <= i < j <= k + 1:
            raise ValueError(f"pair ({i},{j}) is not of the form 1 <= i < j <= {k + 1}")
    return pairs


def find_similar_configuration(
    E: PointSet,
    r,
    k: int,
    pairs: Sequence[tuple[int, int]] | None = None,
) -> SimilarConfiguration:
    """Find k+1 points x_i in E and y_i in E with ||y_i - y_j||^2 = r ||x_i - x_j||^2.

    Builds the similarity B (over F_q for even d, over F_{q^2} for odd d),
    picks the translation a maximizing |B E  cap  (E + a)| from the multiset
    of differences B z - y, and reads off the matched pairs.
    """
    f, d = E.field, E.d
    if k < 1:
        raise ValueError("k must be >= 1")
    pairs = all_pairs(k) if pairs is None else _check_pairs(k, pairs)
    r = f(r)
    if not r:
        raise FieldError("ratio must be nonzero")
    if d % 2 == 0:
        sim = build_similarity_even(f, d, r)
        amb = f
        Z = E.coords
        translations = f.q**d
    else:
        ext = QuadraticExtension(f)
        sim = build_similarity_odd(ext, d, r)
        amb = ext.ext
        Z = np.array(ext.embed_map, dtype=np.int64)[E.coords]
        translations = f.q ** (d + 1)
    n = len(E)
    BZ = sim.matrix.apply_many(Z)
    diffs = amb.vsub(np.repeat(BZ, n, axis=0), np.tile(Z, (n, 1)))
    uniq, inverse, counts = np.unique(diffs, axis=0, return_inverse=True, return_counts=True)
    best = int(np.argmax(counts))
    mult = int(counts[best])
    if mult < k + 1:
        raise ConfigurationNotFound(mult, k + 1)
    hits = np.flatnonzero(inverse.ravel() == best)
    z_idx, y_idx = hits // n, hits % n
    order = np.lexsort(BZ[z_idx].T[::-1])[: k + 1]
    pts = E.tuples
    xs = tuple(Point(f, pts[i]) for i in z_idx[order])
    ys = tuple(Point(f, pts[i]) for i in y_idx[order])
    config = SimilarConfiguration(
        k=k,
        pairs=pairs,
        ratio=r,
        xs=xs,
        ys=ys,
        translation=Point(amb, tuple(int(c) for c in uniq[best])),
        similarity=sim,
        multiplicity=mult,
        translation_count=translations,
        set_size=n,
    )
    problems = check_configuration(config, E)
    if problems:
        raise AssertionError("; ".join(problems))
    return config


def check_configuration(config: SimilarConfiguration, E: PointSet) -> list[str]:
    """Independent re-check using only norm_sq on points of E; returns a list of problems."""
    problems = []
    xs, ys, r = config.xs, config.ys, config.ratio
    if len(xs) != config.k + 1 or len(ys) != config.k + 1:
        problems.append("wrong number of points")
    for p in xs + ys:
        if p not in E:
            problems.append(f"{p.coords} is not in E")
    if len(set(xs)) != len(xs):
        problems.append("xs are not distinct")
    if len(set(ys)) != len(ys):
        problems.append("ys are not distinct")
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if norm_sq(ys[i] - ys[j]) != r * norm_sq(xs[i] - xs[j]):
                problems.append(f"pair ({i + 1},{j + 1}) violates the similarity")
    return problems


def bhowmik_size(q: int, d: int, k: int) -> int:
    """Hypothesis size 2k q^{d/2} (d even) or 2k q^{(d+1)/2} (d odd)."""
    return 2 * k * q ** (d // 2) if d % 2 == 0 else 2 * k * q ** ((d + 1) // 2)


def verify_bhowmik(
    q: int,
    d: int,
    k: int,
    r: int | Iterable[int] | None = None,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Run the configuration finder on random E at exactly the hypothesis size.

    ``r=None`` means every nonzero r.  A not-found under the met hypothesis
    is a falsifier and fails the report.
    """
    start = time.perf_counter()
    f = field_of_order(q)
    size = bhowmik_size(q, d, k)
    if size > q**d:
        raise HypothesisError(f"hypothesis size {size} exceeds q^d = {q**d}")
    if r is None:
        rs = list(range(1, q))
    elif isinstance(r, (int, FieldElement)):
        rs = [f(r).value]
    else:
        rs = [f(x).value for x in r]
    if any(x == 0 for x in rs):
        raise FieldError("ratio must be nonzero")
    translations = q**d if d % 2 == 0 else q ** (d + 1)
    mults, failures = [], []
    for rv in rs:
        for t in range(trials):
            E = gen_random_pointset(f, d, size, (seed, rv, t))
            try:
                config = find_similar_configuration(E, rv, k)
            except ConfigurationNotFound as exc:
                failures.append({"r": rv, "trial": t, "best": exc.best_multiplicity, "pointset": E.to_json()})
                continue
            mults.append(config.multiplicity)
            if not config.averaging_ok:
                failures.append({"r": rv, "trial": t, "averaging": config.multiplicity, "pointset": E.to_json()})
    return VerificationReport(
        theorem="similar_configuration",
        params={"q": q, "d": d, "k": k, "size": size, "r": rs, "trials": trials, "seed": seed},
        passed=not failures,
        bound=Fraction(size * size, translations),
        min_observed=min(mults) if mults else None,
        max_observed=max(mults) if mults else None,
        flags={"averaging_bound": all(m * translations >= size * size for m in mults)},
        witness=failures[0] if failures else None,
        details={"runs": len(rs) * trials, "found": len(mults), "needed_multiplicity": k + 1},
        elapsed_ms=_elapsed(start),
    )
