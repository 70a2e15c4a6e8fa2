"""Univariate polynomials over GF(q) and the twisted / dual polynomial spaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldCtx, FieldError
from .linalg import rank


class ParameterError(ValueError):
    """Parameters outside the window an operation is defined on."""


class Poly:
    """Polynomial with coefficients (canonical indices) listed low to high."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int] = ()):
        c = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.int64)
        nz = np.flatnonzero(c)
        self.ctx = ctx
        self.coeffs = c[: nz[-1] + 1].copy() if nz.size else np.zeros(0, dtype=np.int64)

    @classmethod
    def monomial(cls, ctx: FieldCtx, e: int, coef: int = 1) -> "Poly":
        c = np.zeros(e + 1, dtype=np.int64)
        c[e] = coef
        return cls(ctx, c)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: dict[int, int]) -> "Poly":
        """Build from {exponent: coefficient}; repeated exponents are not merged."""
        if not terms:
            return cls(ctx)
        c = np.zeros(max(terms) + 1, dtype=np.int64)
        for e, a in terms.items():
            c[e] = a
        return cls(ctx, c)

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots: Iterable[int]) -> "Poly":
        f = cls(ctx, [1])
        for r in roots:
            f = f * cls(ctx, [int(ctx.neg(r)), 1])
        return f

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if len(self.coeffs) else float("-inf")

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coeff(self, e: int) -> int:
        return int(self.coeffs[e]) if 0 <= e < len(self.coeffs) else 0

    def terms(self) -> dict[int, int]:
        return {int(e): int(self.coeffs[e]) for e in np.flatnonzero(self.coeffs)}

    def _check(self, other: "Poly") -> None:
        if other.ctx != self.ctx:
            raise FieldError("polynomials over different fields")

    def _padded(self, other: "Poly") -> tuple[np.ndarray, np.ndarray]:
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return a, b

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self._padded(other)
        return Poly(self.ctx, self.ctx.add(a, b))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self._padded(other)
        return Poly(self.ctx, self.ctx.sub(a, b))

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, self.ctx.neg(self.coeffs))

    def scale(self, a: int) -> "Poly":
        return Poly(self.ctx, self.ctx.mul(self.coeffs, int(a)))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        return poly_mul(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and other.ctx == self.ctx
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __call__(self, a):
        return eval_vector(self, a) if np.ndim(a) else int(eval_vector(self, [a])[0])

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self.terms().items()}

    @classmethod
    def from_json(cls, ctx: FieldCtx, d: dict) -> "Poly":
        return cls.from_terms(ctx, {int(e): int(c) for e, c in d.items()})

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        parts = [f"{c}*x^{e}" if e else f"{c}" for e, c in self.terms().items()]
        return "Poly(" + " + ".join(parts) + ")"


def poly_mul(f: Poly, g: Poly) -> Poly:
    ctx = f.ctx
    if f.is_zero() or g.is_zero():
        return Poly(ctx)
    out = np.zeros(len(f.coeffs) + len(g.coeffs) - 1, dtype=np.int64)
    for i in np.flatnonzero(f.coeffs):
        seg = slice(i, i + len(g.coeffs))
        out[seg] = ctx.add(out[seg], ctx.mul(g.coeffs, int(f.coeffs[i])))
    return Poly(ctx, out)


def reduce_exponent(e: int, q: int) -> int:
    """Exponent of the monomial agreeing with x^e on all of GF(q); 0 stays 0."""
    return e if e < q else (e - 1) % (q - 1) + 1


def reduce_mod_field(f: Poly) -> Poly:
    """Reduce modulo x^q - x: same evaluation vector on GF(q), degree <= q-1."""
    ctx, q = f.ctx, f.ctx.q
    if len(f.coeffs) <= q:
        return f
    out = np.zeros(q, dtype=np.int64)
    out[:q] = f.coeffs[:q]
    for e in range(q, len(f.coeffs)):
        c = int(f.coeffs[e])
        if c:
            r = reduce_exponent(e, q)
            out[r] = ctx.add(out[r], c)
    return Poly(ctx, out)


def eval_vector(f: Poly, points) -> np.ndarray:
    """Evaluate at each point (the constant term is f(0), i.e. 0^0 = 1)."""
    ctx = f.ctx
    pts = np.asarray(points, dtype=np.int64)
    if pts.size and (pts.min() < 0 or pts.max() >= ctx.q):
        raise FieldError("evaluation point outside the polynomial's field")
    nz = np.flatnonzero(f.coeffs)
    if 2 * len(nz) > len(f.coeffs):
        acc = np.zeros(pts.shape, dtype=np.int64)
        for c in f.coeffs[::-1]:
            acc = ctx.add(ctx.mul(acc, pts), int(c))
        return acc
    # sparse: sum of c * a^e over the nonzero terms
    acc = np.zeros(pts.shape, dtype=np.int64)
    for e in nz:
        acc = ctx.add(acc, ctx.mul(ctx.pow(pts, int(e)), int(f.coeffs[e])))
    return acc


def evaluation_matrix(polys: Sequence[Poly], points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    if not polys:
        return np.zeros((0, len(pts)), dtype=np.int64)
    return np.vstack([eval_vector(f, pts) for f in polys])


def coefficient_matrix(polys: Sequence[Poly], width: int | None = None) -> np.ndarray:
    width = width or max((len(f.coeffs) for f in polys), default=0)
    M = np.zeros((len(polys), width), dtype=np.int64)
    for i, f in enumerate(polys):
        M[i, : len(f.coeffs)] = f.coeffs
    return M


# -- twisted spaces ---------------------------------------------------------


@dataclass(frozen=True)
class TwistParams:
    """(k, t, h, eta) of the twisted space; eta is a canonical field index."""

    k: int
    t: int
    h: int
    eta: int

    def validate(self, ctx: FieldCtx | None = None) -> "TwistParams":
        k, t, h = self.k, self.t, self.h
        if k < 3:
            raise ParameterError(f"dimension k={k} must be >= 3")
        if t < 1:
            raise ParameterError(f"twist t={t} must be >= 1")
        if not 0 <= h <= k - 1:
            raise ParameterError(f"hook h={h} must satisfy 0 <= h <= k-1={k - 1}")
        if t + h > k - 1:
            raise ParameterError(f"t+h={t + h} exceeds k-1={k - 1}")
        if self.eta == 0:
            raise ParameterError("eta must be nonzero")
        if ctx is not None and not 0 < self.eta < ctx.q:
            raise ParameterError(f"eta={self.eta} is not an element of GF({ctx.q})")
        return self

    @property
    def is_glued(self) -> bool:
        """(h, t) == (0, k-1): the shape whose square keeps a glued x + eta x^(2k-1)."""
        return self.h == 0 and self.t == self.k - 1

    def to_dict(self) -> dict:
        return {"k": self.k, "t": self.t, "h": self.h, "eta": self.eta}


@dataclass
class SpaceBasis:
    polys: list[Poly]
    ambient: FieldCtx
    label: str = ""
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def is_independent(self) -> bool:
        if not self.polys:
            return True
        return rank(self.ambient, coefficient_matrix(self.polys)) == len(self.polys)

    def evaluate(self, points) -> np.ndarray:
        return evaluation_matrix(self.polys, points)

    def combine(self, coeffs) -> Poly:
        out = Poly(self.ambient)
        for c, f in zip(coeffs, self.polys):
            if int(c):
                out = out + f.scale(int(c))
        return out


def twisted_basis(ctx: FieldCtx, params: TwistParams) -> SpaceBasis:
    """x^s (s != h, s < k) together with x^h + eta x^(k-1+t)."""
    params.validate(ctx)
    k, t, h, eta = params.k, params.t, params.h, params.eta
    if k - 1 + t > ctx.q - 1:
        raise ParameterError(f"twist degree k-1+t={k - 1 + t} exceeds q-1={ctx.q - 1}")
    polys = [Poly.monomial(ctx, s) for s in range(k) if s != h]
    polys.append(Poly.from_terms(ctx, {h: 1, k - 1 + t: eta}))
    return SpaceBasis(polys, ctx, label=f"V(k={k},t={t},h={h},eta={eta})")


class Regime(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"


REGIME_INEQUALITY = {
    Regime.R1: "(q-t+1)/2 < k <= q/2",
    Regime.R2: "(q-2t+1)/2 < k <= (q-t+1)/2",
    Regime.R3: "3 <= k <= (q-2t+1)/2",
}


def classify_regime(q: int, k: int, t: int) -> Regime:
    if t < 1:
        raise ParameterError(f"twist t={t} must be >= 1")
    if k < 3 or 2 * k > q:
        raise ParameterError(f"k={k} outside 3 <= k <= q/2 = {q / 2}")
    if 2 * k > q - t + 1:
        return Regime.R1
    if 2 * k > q - 2 * t + 1:
        return Regime.R2
    return Regime.R3


def _mono(ctx: FieldCtx, exps: Iterable[int]) -> list[Poly]:
    return [Poly.monomial(ctx, e) for e in exps]


def dual_space_basis(ctx: FieldCtx, params: TwistParams, literal: bool = False) -> SpaceBasis:
    """Basis of the polynomial space whose evaluations on all of GF(q) form
    the dual of the Schur square of the standard twisted code.

    ``literal=True`` returns the closed forms exactly as printed in the
    source; the default corrects them in three places (see ``notes`` on
    the returned basis):

    * regime R3, (h, t) = (0, k-1): the printed space glues
      x^(q-4k+3) and x^(q-2k) - eta x^(q-2) into one generator and so has
      one dimension too few; the true space keeps them apart.
    * regime R3 with 2k+2t-2 = q-1 and h = 0: the generator paired with
      the constant becomes (1 + eta^2) - eta^2 x^(q-1), because
      x^(q-1) is not self-orthogonal over GF(q).
    * (k, t, h) = (3, 1, 1): the square has dimension 2k, so the dual
      gains x^(q-6) - eta x^(q-4) + eta^2 x^(q-2).
    """
    params.validate(ctx)
    q, k, t, h, eta = ctx.q, params.k, params.t, params.h, params.eta
    reg = classify_regime(q, k, t)
    e2 = int(ctx.pow(eta, 2))
    e3 = int(ctx.pow(eta, 3))
    neg = lambda a: int(ctx.neg(a))  # noqa: E731
    notes: list[str] = []
    label = f"Vperp[{reg.value}]"

    if reg is Regime.R1:
        return SpaceBasis([], ctx, label=label)

    if reg is Regime.R2:
        if params.is_glued:
            polys = _mono(ctx, range(q - 3 * k + 2))
            if q == 4 * k - 4:
                polys.append(Poly.from_terms(ctx, {q - 2 * k: 1, q - 2: neg(eta), q - 1: e3}))
            elif q < 4 * k - 4:
                polys.append(Poly.from_terms(ctx, {q - 2 * k: 1, q - 2: neg(eta)}))
            else:  # unreachable: R2 with t = k-1 forces q <= 4k-4
                raise ParameterError(f"regime R2 with t=k-1 needs q <= 4k-4, got q={q}, k={k}")
            return SpaceBasis(polys, ctx, label=label)
        return SpaceBasis(_mono(ctx, range(q - 2 * k - t + 1)), ctx, label=label)

    # regime R3
    if params.is_glued:
        e = q - 4 * k + 3
        polys = _mono(ctx, (i for i in range(q - 3 * k + 2) if i != e))
        if literal:
            polys.append(Poly.from_terms(ctx, {e: 1, q - 2 * k: 1, q - 2: neg(eta), q - 1: neg(e2)}))
        else:
            polys.append(Poly.from_terms(ctx, {q - 2 * k: 1, q - 2: neg(eta)}))
            polys.append(_constant_partner(ctx, e, e2))
            notes.append("split glued generator (printed form is one dimension short)")
            if e == 0:
                notes.append("boundary 4k-4 = q-1: constant coefficient adjusted")
        return SpaceBasis(polys, ctx, label=label, notes=notes)

    e = q - 2 * k - 2 * t + 1
    polys = _mono(ctx, (i for i in range(q - 2 * k - t + 1) if i != e))
    if h == 0:
        if literal:
            polys.append(Poly.from_terms(ctx, {e: 1, q - 1: neg(e2)}))
        else:
            polys.append(_constant_partner(ctx, e, e2))
            if e == 0:
                notes.append("boundary 2k+2t-2 = q-1: constant coefficient adjusted")
    elif (k, t, h) == (3, 1, 1) and not literal:
        # V = <1, x^2, x + eta x^3> never produces x^3 on its own, so the
        # square has dimension 6, not 2k+t = 7.
        polys.append(Poly.from_terms(ctx, {q - 6: 1, q - 4: neg(eta), q - 2: e2}))
        notes.append("(k,t,h)=(3,1,1): extra generator, square has dimension 2k not 2k+t")
    return SpaceBasis(polys, ctx, label=label, notes=notes)


def _constant_partner(ctx: FieldCtx, e: int, eta2: int) -> Poly:
    """x^e - eta^2 x^(q-1), corrected to (1+eta^2) - eta^2 x^(q-1) when e = 0."""
    q = ctx.q
    lead = 1 if e else int(ctx.add(1, eta2))
    terms = {q - 1: int(ctx.neg(eta2))}
    if lead:
        terms[e] = lead
    return Poly.from_terms(ctx, terms)
