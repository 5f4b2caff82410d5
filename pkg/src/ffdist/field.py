"""Exact arithmetic in F_p and F_{p^n} for odd p.

Elements are stored as integer indices ``sum(c_i * p**i)`` over their
coefficient vector (constant term first), so ``0`` is zero, ``1`` is one,
and the enumeration order of the field is plain integer order.  Every
field is small enough (q <= 2**20) to carry full lookup tables for
squares, square roots and, when n > 1, discrete logarithms.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

MAX_Q = 2**20


class FieldError(ValueError):
    """Invalid field parameters or an operation outside its domain."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    i = 3
    while i * i <= m:
        if m % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, n) with q = p**n, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, rest = 0, q
    while rest % p == 0:
        rest //= p
        n += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, n


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# --- polynomials over F_p as coefficient lists, constant term first -------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """a*b reduced modulo the monic polynomial ``mod``."""
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1 if a and b else 0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k] % p
        if c:
            for j in range(n + 1):
                prod[k - n + j] -= c * mod[j]
    return [c % p for c in prod[:n]] + [0] * max(0, n - len(prod))


def poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - c * bj) % p
        _trim(a)
    return a


def _monic_polys(p: int, deg: int) -> Iterator[list[int]]:
    # lower coefficients enumerated as an index, constant term least significant
    for idx in range(p**deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(idx % p)
            idx //= p
        yield coeffs + [1]


def irreducible_polys(p: int, deg: int) -> list[list[int]]:
    """All monic irreducible polynomials of the given degree, in index order."""
    lower = [f for d in range(1, deg // 2 + 1) for f in irreducible_polys(p, d)]
    return [f for f in _monic_polys(p, deg) if all(poly_rem(f, g, p) for g in lower)]


def smallest_irreducible(p: int, n: int) -> list[int]:
    if n == 1:
        return [0, 1]
    lower = [f for d in range(1, n // 2 + 1) for f in irreducible_polys(p, d)]
    for f in _monic_polys(p, n):
        if f[0] == 0:
            continue
        if n <= 3 and any(_poly_eval(f, x, p) == 0 for x in range(p)):
            continue
        if all(poly_rem(f, g, p) for g in lower):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {n} over F_{p}")


def _poly_eval(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


# --- field -----------------------------------------------------------------


class FieldDescriptor:
    """The field F_{p^n} = F_p[x]/(modulus).

    Scalar methods (``add``, ``mul``, ...) act on integer indices; the
    ``v``-prefixed variants act elementwise on numpy integer arrays.
    """

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if p == 2:
            raise FieldError("even characteristic is not supported")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        if p**n > MAX_Q:
            raise FieldError(f"q = {p}^{n} exceeds the enumeration bound {MAX_Q}")
        self.p = p
        self.n = n
        self.q = p**n
        if modulus is None:
            modulus = smallest_irreducible(p, n)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {n}")
        if n > 1:
            lower = [f for d in range(1, n // 2 + 1) for f in irreducible_polys(p, d)]
            if not all(poly_rem(modulus, g, p) for g in lower):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = tuple(modulus)
        self._powers = np.array([p**i for i in range(n)], dtype=np.int64)
        if n > 1:
            self._build_log_tables()
        self._build_square_tables()

    # identity ---------------------------------------------------------------

    def _key(self):
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldDescriptor) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={list(self.modulus)})"

    # encoding ---------------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.n:
            coeffs = poly_rem(coeffs, self.modulus, self.p)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value) -> "FieldElement":
        """Make an element from an int (n == 1, reduced mod p) or a coefficient list."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self.from_coeffs(value), self)
        if self.n == 1:
            return FieldElement(int(value) % self.p, self)
        value = int(value)
        if not 0 <= value < self.q:
            raise FieldError(f"index {value} out of range for {self!r}")
        return FieldElement(value, self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(i, self) for i in range(self.q)]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    # tables -----------------------------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        return self.from_coeffs(poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    def _pow_poly(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    def _mul_matrix(self, h: int) -> np.ndarray:
        # row j holds the coefficients of h * x^j, so coeffs(e) @ M = coeffs(h*e)
        return np.array(
            [poly_mulmod(self.coeffs(h), [0] * j + [1], self.modulus, self.p) for j in range(self.n)],
            dtype=np.int64,
        )

    def _build_log_tables(self):
        q, p = self.q, self.p
        factors = _prime_factors(q - 1)
        gen = next(
            g for g in range(2, q) if all(self._pow_poly(g, (q - 1) // f) != 1 for f in factors)
        )
        self.generator = gen
        # powers g^0..g^(m-1) as coefficient rows; doubled by one matrix product per step
        block = np.zeros((1, self.n), dtype=np.int64)
        block[0, 0] = 1
        step = gen
        while block.shape[0] < q - 1:
            block = np.vstack([block, block @ self._mul_matrix(step) % p])
            step = self._mul_poly(step, step)
        exp = (block[: q - 1] @ self._powers).astype(np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        if (log[1:] < 0).any():
            raise AssertionError("generator search produced a non-primitive element")
        self._exp = np.concatenate([exp, exp])
        self._log = log

    def _build_square_tables(self):
        q = self.q
        idx = np.arange(q, dtype=np.int64)
        sq = self.vmul(idx, idx)
        root = np.full(q, q, dtype=np.int64)
        np.minimum.at(root, sq, idx)
        root[root == q] = -1
        self._sqrt = root

    # scalar arithmetic on indices -------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.n == 1:
            return (a + b) % p
        out, m = 0, 1
        for _ in range(self.n):
            out += (a % p + b % p) % p * m
            a //= p
            b //= p
            m *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.n == 1:
            return -a % p
        out, m = 0, 1
        for _ in range(self.n):
            out += -(a % p) % p * m
            a //= p
            m *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.n == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 0 if e else 1
        return int(self._exp[self._log[a] * e % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def is_square(self, a: int) -> bool:
        return bool(self._sqrt[a] >= 0)

    def sqrt(self, a: int) -> int:
        root = int(self._sqrt[a])
        if root < 0:
            raise FieldError(f"{self.coeffs(a) if self.n > 1 else a} is not a square in {self!r}")
        return root

    # vectorized arithmetic on index arrays ----------------------------------

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if self.n == 1:
            return (a + b) % p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for m in self._powers:
            out += (a // m % p + b // m % p) % p * m
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        p = self.p
        if self.n == 1:
            return -a % p
        out = np.zeros(a.shape, dtype=np.int64)
        for m in self._powers:
            out += -(a // m % p) % p * m
        return out

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return a * b % self.p
        a, b = np.broadcast_arrays(a, b)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    # derived sets -----------------------------------------------------------

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self._sqrt >= 0).tolist())

    def sqrt_by_exponent(self, a: int) -> int:
        """Square root via a^((q+1)/4); valid only for q = 3 mod 4 and square a."""
        if self.q % 4 != 3:
            raise FieldError("exponent square root needs q = 3 mod 4")
        root = self.pow(a, (self.q + 1) // 4)
        if self.mul(root, root) != a:
            raise FieldError(f"{a} is not a square in {self!r}")
        return min(root, self.neg(root))

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    def encode(self, a: int):
        """JSON form of an element: an int for prime fields, else a coefficient list."""
        return a if self.n == 1 else list(self.coeffs(a))

    def decode(self, value) -> int:
        if self.n == 1:
            if isinstance(value, list) or not 0 <= int(value) < self.p:
                raise FieldError(f"coordinate {value!r} out of range for {self!r}")
            return int(value)
        if not isinstance(value, list) or len(value) != self.n or any(not 0 <= c < self.p for c in value):
            raise FieldError(f"coordinate {value!r} is not a valid element of {self!r}")
        return self.from_coeffs(value)


def construct_field(p: int, n: int = 1) -> FieldDescriptor:
    return FieldDescriptor(p, n)


def field_from_json(obj: dict) -> FieldDescriptor:
    return FieldDescriptor(int(obj["p"]), int(obj.get("n", 1)), obj.get("modulus"))


def field_of_order(q: int) -> FieldDescriptor:
    return FieldDescriptor(*prime_power(q))


class FieldElement:
    """A value in a FieldDescriptor; supports + - * / ** and comparisons."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: FieldDescriptor):
        self.value = value
        self.field = field

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldError(f"cannot mix elements of {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field(other).value
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(v, self.field)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == self.field(other).value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p, self.field.n))

    def __lt__(self, other: "FieldElement"):
        return self.value < self._other(other)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.field.n == 1:
            return f"{self.value} (mod {self.field.p})"
        return f"{list(self.coeffs)} in {self.field!r}"


def arith(op: str, x: FieldElement, y: FieldElement) -> FieldElement:
    if op not in ("add", "sub", "mul"):
        raise ValueError(f"unknown operation {op!r}")
    if x.field != y.field:
        raise FieldError("operands belong to different fields")
    return FieldElement(getattr(x.field, op)(x.value, y.value), x.field)


def invert(x: FieldElement) -> FieldElement:
    if not x:
        raise FieldError("0 has no inverse")
    return FieldElement(x.field.inv(x.value), x.field)


def is_square(x: FieldElement) -> bool:
    return x.field.is_square(x.value)


def square_root(x: FieldElement) -> FieldElement:
    """The smaller (in enumeration order) of the two roots of a square."""
    return FieldElement(x.field.sqrt(x.value), x.field)


def enumerate_field(f: FieldDescriptor) -> list[FieldElement]:
    return f.elements()


class QuadraticExtension:
    """F_{q^2} together with a fixed embedding of F_q.

    The embedding sends the base variable x to the smallest root of the
    base modulus in the extension, and is checked to be a ring
    homomorphism when built.
    """

    def __init__(self, base: FieldDescriptor):
        if base.q**2 > MAX_Q:
            raise FieldError(f"extension of {base!r} exceeds the enumeration bound")
        self.base = base
        self.ext = FieldDescriptor(base.p, 2 * base.n)
        ext = self.ext
        if base.n == 1:
            table = list(range(base.q))
        else:
            alpha = next(
                a for a in range(ext.q)
                if self._eval_in_ext(base.modulus, a) == 0
            )
            alpha_pows = [1]
            for _ in range(base.n - 1):
                alpha_pows.append(ext.mul(alpha_pows[-1], alpha))
            table = []
            for e in range(base.q):
                acc = 0
                for c, ap in zip(base.coeffs(e), alpha_pows):
                    acc = ext.add(acc, ext.mul(c, ap))
                table.append(acc)
        self.embed_map = tuple(table)
        self._check_homomorphism()
        self._preimage = {v: i for i, v in enumerate(self.embed_map)}

    def _eval_in_ext(self, poly, a: int) -> int:
        acc = 0
        for c in reversed(poly):
            acc = self.ext.add(self.ext.mul(acc, a), c)
        return acc

    def _check_homomorphism(self):
        base, ext, emb = self.base, self.ext, self.embed_map
        if emb[1] != 1 or len(set(emb)) != base.q:
            raise AssertionError("embedding is not injective and unital")
        # additivity and multiplication by each basis monomial give the full check by linearity
        basis = [base.from_coeffs([0] * i + [1]) for i in range(base.n)]
        for a in range(base.q):
            for b in basis:
                if emb[base.add(a, b)] != ext.add(emb[a], emb[b]):
                    raise AssertionError("embedding is not additive")
                if emb[base.mul(a, b)] != ext.mul(emb[a], emb[b]):
                    raise AssertionError("embedding is not multiplicative")

    def embed(self, x: FieldElement | int) -> FieldElement:
        v = x.value if isinstance(x, FieldElement) else x
        return FieldElement(self.embed_map[v], self.ext)

    def restrict(self, y: FieldElement | int) -> FieldElement | None:
        """Preimage of an extension element in the base field, or None."""
        v = y.value if isinstance(y, FieldElement) else y
        pre = self._preimage.get(v)
        return None if pre is None else FieldElement(pre, self.base)

    def sqrt(self, r: FieldElement | int) -> FieldElement:
        """Canonical square root in the extension of a base element."""
        return FieldElement(self.ext.sqrt(self.embed(r).value), self.ext)


def build_quadratic_extension(base: FieldDescriptor) -> QuadraticExtension:
    return QuadraticExtension(base)
