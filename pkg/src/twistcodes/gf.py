"""Table-driven arithmetic in GF(p^m).

Elements are plain integers: the canonical index of an element is the
integer whose base-p digits are its coefficients in the polynomial basis
1, x, ..., x^(m-1) (digit i is the coefficient of x^i).  Index 0 is the
zero element, indices 0..p-1 are the prime subfield, and sorting indices
is the same as sorting coefficient tuples with the x^(m-1) coefficient
compared first.

Bulk arithmetic works on numpy integer arrays of indices; ``FieldElem``
wraps a single index for scalar code that wants operators.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

MAX_ORDER = 1 << 16
_ADD_TABLE_LIMIT = 1024

# Low-to-high coefficient lists of primitive moduli for common small fields.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}


class FieldError(ValueError):
    """Invalid field parameters or an illegal field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p) as low-to-high coefficient lists ----------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        _trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    modulus = _trim([c % p for c in modulus])
    m = len(modulus) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for tail in product(range(p), repeat=d):
            if not _pmod(modulus, list(tail) + [1], p):
                return False
    return True


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m (constant term compared first)."""
    for tail in product(range(p), repeat=m):
        cand = list(tail) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.m

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(int(d["p"]), int(d["m"]), tuple(int(c) for c in d["modulus"]))


class FieldCtx:
    """An explicit finite field GF(p^m) with log/antilog tables."""

    def __init__(self, spec: FieldSpec):
        p, m = spec.p, spec.m
        self.spec = spec
        self.p, self.m = p, m
        self.q = q = p**m
        self.order = q
        self.elements = np.arange(q, dtype=np.int64)
        self._place = p ** np.arange(m, dtype=np.int64)
        self._digits = (self.elements[:, None] // self._place[None, :]) % p

        self.neg_table = (((-self._digits) % p) @ self._place).astype(np.int64)
        if p == 2 or m == 1:
            self._add_table = None
        elif q <= _ADD_TABLE_LIMIT:
            d = (self._digits[:, None, :] + self._digits[None, :, :]) % p
            self._add_table = (d @ self._place).astype(np.int64)
        else:
            self._add_table = None

        self.generator = self._find_generator()
        exp = np.empty(2 * (q - 1), dtype=np.int64)
        g = self._from_index(self.generator)
        acc = self._from_index(1)
        for i in range(q - 1):
            exp[i] = self._to_index(acc)
            acc = self._mulmod(acc, g)
        exp[q - 1 :] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        if len(set(exp[: q - 1].tolist())) != q - 1:
            raise FieldError("generator search failed; modulus is not irreducible")
        self.exp_table, self.log_table = exp, log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self.inv_table = inv

    # -- construction helpers (pure-python polynomial arithmetic) --------

    def _from_index(self, a: int) -> list[int]:
        return [int(c) for c in self._digits[a]]

    def _to_index(self, c: Sequence[int]) -> int:
        return int(sum(int(ci) * int(w) for ci, w in zip(c, self._place)))

    def _mulmod(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        red = _pmod(prod, self.spec.modulus, p)
        return red + [0] * (m - len(red))

    def _powmod(self, a: list[int], e: int) -> list[int]:
        result = self._from_index(1)
        while e:
            if e & 1:
                result = self._mulmod(result, a)
            a = self._mulmod(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for cand in range(2, q):
            c = self._from_index(cand)
            if all(self._powmod(c, (q - 1) // r) != self._from_index(1) for r in factors):
                return cand
        raise FieldError("no primitive element found; modulus is not irreducible")

    # -- elementwise arithmetic on index arrays --------------------------

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._place

    def neg(self, a):
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        out = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        """a**e with 0**0 == 1."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self.exp_table[(self.log_table[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def sum(self, a, axis=None):
        """Field sum along an axis (all axes when None)."""
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            if axis is None:
                return np.bitwise_xor.reduce(a.ravel())
            return np.bitwise_xor.reduce(a, axis=axis)
        d = self._digits[a]
        if axis is None:
            return (d.reshape(-1, self.m).sum(axis=0) % self.p) @ self._place
        if axis < 0:
            axis += a.ndim
        return (d.sum(axis=axis) % self.p) @ self._place

    def dot(self, a, b, axis=-1):
        return self.sum(self.mul(a, b), axis=axis)

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        if self.m == 1:
            return (A @ B) % self.p
        return self.sum(self.mul(A[:, :, None], B[None, :, :]), axis=1)

    # -- element helpers ---------------------------------------------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(self, int(value))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(p)."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return int(self.log_table[a]) % 2 == 0

    def sqrt(self, a: int) -> int:
        """One square root of a (the one with even discrete log when p is odd)."""
        a = int(a)
        if a == 0:
            return 0
        if self.p == 2:
            return int(self.pow(a, self.q // 2))
        lg = int(self.log_table[a])
        if lg % 2:
            raise FieldError(f"{a} is not a square in GF({self.q})")
        return int(self.exp_table[lg // 2])

    def coefficients(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits[a])

    def __repr__(self) -> str:
        return f"FieldCtx(GF({self.p}^{self.m}), modulus={list(self.spec.modulus)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __reduce__(self):
        return (make_field, (self.p, self.m, self.spec.modulus))

    @cached_property
    def nonzero(self) -> np.ndarray:
        return self.elements[1:]


_FIELD_CACHE: dict[FieldSpec, FieldCtx] = {}


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    """Build (or fetch from cache) GF(p^m).

    ``modulus`` is a low-to-high coefficient list of a monic irreducible of
    degree m.  When omitted, a built-in primitive modulus is used if one is
    tabulated, else the lexicographically least irreducible.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if p**m > MAX_ORDER:
        raise FieldError(f"GF({p}^{m}) exceeds the size guard q <= {MAX_ORDER}")
    if modulus is None:
        if m == 1:
            modulus = (0, 1)
        else:
            modulus = DEFAULT_MODULI.get((p, m)) or least_irreducible(p, m)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != m + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {m}")
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {list(modulus)} is reducible over GF({p})")
    spec = FieldSpec(p, m, modulus)
    ctx = _FIELD_CACHE.get(spec)
    if ctx is None:
        ctx = _FIELD_CACHE[spec] = FieldCtx(spec)
    return ctx


def field_from_order(q: int) -> FieldCtx:
    for p in range(2, q + 1):
        if q % p == 0:
            break
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return make_field(p, m)


def subfield_elements(ctx: FieldCtx, r: int) -> np.ndarray:
    """The p^r elements fixed by a -> a^(p^r), in canonical order."""
    if r < 1 or ctx.m % r:
        raise FieldError(f"subfield degree {r} does not divide {ctx.m}")
    els = ctx.elements
    fixed = els[ctx.pow(els, ctx.p**r) == els]
    assert len(fixed) == ctx.p**r
    return fixed


class FieldElem:
    """A single element bound to its field."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        if not 0 <= value < ctx.q:
            raise FieldError(f"index {value} outside GF({ctx.q})")
        self.ctx = ctx
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise FieldError("cannot combine elements of different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(int(other))
        return NotImplemented

    def _wrap(self, v) -> "FieldElem":
        return FieldElem(self.ctx, int(v))

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.ctx.pow(self.value, e))

    def inverse(self) -> "FieldElem":
        return self._wrap(self.ctx.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.ctx.from_int(int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.spec, self.value))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.ctx.q})[{self.value}]"
