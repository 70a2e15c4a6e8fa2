"""Self-orthogonality oracle, non-existence predicates and explicit constructions.

A twisted code C(alpha, v) is self-orthogonal exactly when some f in the
dual polynomial space takes the value v_j^2 at every evaluation point and
vanishes on every field element outside the evaluation set.  That
condition is a linear system in the coefficients of f over a basis of the
dual space; ``theorem41_check`` solves it directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .codes import LinearCode, is_self_orthogonal
from .gf import FieldCtx, make_field, subfield_elements
from .gtrs import EvalConfig, gtrs_code, regime
from .linalg import nullspace, rank, solve_affine
from .poly import (
    ParameterError,
    Poly,
    SpaceBasis,
    TwistParams,
    coefficient_matrix,
    dual_space_basis,
    eval_vector,
)


class WindowError(ParameterError):
    """A parameter window of a construction does not hold.

    ``inequality`` names the violated condition in words a caller can grep.
    """

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        self.detail = detail
        super().__init__(f"{inequality}: {detail}" if detail else inequality)

    def to_json(self) -> dict:
        return {"error": "window", "inequality": self.inequality, "detail": self.detail}


# -- the self-orthogonality oracle ----------------------------------------


@dataclass
class SelfOrthWitness:
    verdict: str  # "feasible" | "infeasible"
    witness: Poly | None
    residual: list[int] | None
    n: int
    params: dict
    checks: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
            "residual": self.residual,
            "n": self.n,
            "params": self.params,
            "checks": self.checks,
        }


@lru_cache(maxsize=256)
def _dual_eval(ctx: FieldCtx, params: TwistParams) -> tuple[SpaceBasis, np.ndarray]:
    basis = dual_space_basis(ctx, params)
    return basis, basis.evaluate(ctx.elements)


def _check_oracle_window(cfg: EvalConfig, params: TwistParams) -> None:
    params.validate(cfg.ctx)
    n, k = cfg.n, params.k
    if not 2 * k <= n <= cfg.ctx.q:
        raise WindowError("2k <= n <= q", f"k={k}, n={n}, q={cfg.ctx.q}")
    if k + params.t > n:
        raise WindowError("k+t <= n", f"k={k}, t={params.t}, n={n}")


def in_dual_span(ctx: FieldCtx, basis: SpaceBasis, f: Poly) -> bool:
    if f.is_zero():
        return True
    if not basis.polys:
        return False
    width = max(ctx.q, len(f.coeffs))
    B = coefficient_matrix(basis.polys, width)
    return rank(ctx, np.vstack([B, coefficient_matrix([f], width)])) == rank(ctx, B)


def theorem41_check(cfg: EvalConfig, params: TwistParams) -> SelfOrthWitness:
    """Decide self-orthogonality of the twisted code by solving for f."""
    _check_oracle_window(cfg, params)
    ctx = cfg.ctx
    basis, E = _dual_eval(ctx, params)
    target = np.zeros(ctx.q, dtype=np.int64)
    target[cfg.points] = ctx.mul(cfg.multipliers, cfg.multipliers)
    sol = solve_affine(ctx, E.T, target)
    pinfo = {"q": ctx.q, **params.to_dict()}
    if not sol.feasible:
        return SelfOrthWitness("infeasible", None, sol.certificate, cfg.n, pinfo, {"dual_dim": len(basis)})
    f = basis.combine(sol.particular)
    values = eval_vector(f, ctx.elements)
    checks = {
        "dual_dim": len(basis),
        "values_at_points": bool(np.array_equal(values[cfg.points], target[cfg.points])),
        "vanishes_off_support": not np.delete(values, cfg.points).any(),
        "in_dual_span": in_dual_span(ctx, basis, f),
    }
    if not all(v for key, v in checks.items() if key != "dual_dim"):
        raise AssertionError(f"witness failed re-validation: {checks}")
    return SelfOrthWitness("feasible", f, None, cfg.n, pinfo, checks)


def support_witness_space(ctx: FieldCtx, points, params: TwistParams) -> SpaceBasis:
    """All f in the dual polynomial space that vanish outside ``points``."""
    basis, E = _dual_eval(ctx, params)
    if not basis.polys:
        return SpaceBasis([], ctx, label="empty")
    off = np.setdiff1d(ctx.elements, np.asarray(points, dtype=np.int64))
    if off.size == 0:
        return basis
    K = nullspace(ctx, E[:, off].T)
    return SpaceBasis([basis.combine(c) for c in K], ctx, label="support-restricted")


def multipliers_from_witness(ctx: FieldCtx, points, f: Poly) -> np.ndarray | None:
    """v with v_j^2 = f(point_j), or None when some value is zero or a non-square."""
    vals = eval_vector(f, points)
    if np.any(vals == 0) or not all(ctx.is_square(int(a)) for a in vals):
        return None
    return np.array([ctx.sqrt(int(a)) for a in vals], dtype=np.int64)


# -- non-existence predicates ---------------------------------------------


def corollary41_predicate(ctx: FieldCtx, k: int, t: int) -> bool:
    """No self-orthogonal twisted code exists: 2k > q-t+1."""
    return 2 * k > ctx.q - t + 1


def corollary42_predicate(ctx: FieldCtx, n: int, k: int, t: int, h: int) -> bool:
    """Claimed non-existence for (h,t) != (0,k-1), 3 <= k <= (q-t+1)/2 and n < 2k+t."""
    return (h, t) != (0, k - 1) and 3 <= k and 2 * k <= ctx.q - t + 1 and n < 2 * k + t


# -- explicit constructions ------------------------------------------------


def _row_products(ctx: FieldCtx, M: np.ndarray) -> np.ndarray:
    out = np.ones(M.shape[0], dtype=np.int64)
    for col in M.T:
        out = ctx.mul(out, col)
    return out


def vanishing_multipliers(ctx: FieldCtx, points, outside, half_power: bool = False) -> np.ndarray:
    """prod_{b in outside} (a_j - b), optionally raised to q/2 (a square root in characteristic 2)."""
    pts = np.asarray(points, dtype=np.int64)
    out_arr = np.asarray(outside, dtype=np.int64)
    if out_arr.size == 0:
        v = np.ones(len(pts), dtype=np.int64)
    else:
        v = _row_products(ctx, ctx.sub(pts[:, None], out_arr[None, :]))
    if half_power:
        v = ctx.pow(v, ctx.q // 2)
    return v


def _strict_window(q: int, k: int, t: int) -> None:
    """(q-2t+1)/2 < k < (q-t+1)/2, including the empty-window diagnostic."""
    lo, hi = Fraction(q - 2 * t + 1, 2), Fraction(q - t + 1, 2)
    if not any(lo < kk < hi for kk in range(int(lo), int(hi) + 2)):
        raise WindowError(
            "window empty",
            f"no admissible k: no integer strictly between (q-2t+1)/2 = {float(lo)} and (q-t+1)/2 = {float(hi)}",
        )
    if not lo < k:
        raise WindowError("lower strict bound (q-2t+1)/2 < k", f"{k} <= {float(lo)}")
    if not k < hi:
        raise WindowError("upper strict bound k < (q-t+1)/2", f"{k} >= {float(hi)}")


def _params(ctx: FieldCtx, k: int, t: int, h: int, eta: int) -> TwistParams:
    try:
        return TwistParams(k, t, h, int(eta)).validate(ctx)
    except ParameterError as exc:
        raise WindowError("t+h <= k-1, t >= 1, eta != 0", str(exc)) from exc


def construct_tc1(ctx: FieldCtx, k: int, t: int, h: int, eta: int, l: int, excluded=None):
    """Points GF(q) minus l excluded elements, v_j = prod over excluded of (a_j - b)."""
    q = ctx.q
    _strict_window(q, k, t)
    params = _params(ctx, k, t, h, eta)
    if l < 0 or 2 * l > q - 2 * k - t:
        raise WindowError("l <= (q-2k-t)/2", f"l={l}, (q-2k-t)/2 = {(q - 2 * k - t) / 2}")
    if excluded is None:
        excluded = ctx.elements[q - l :]
    excluded = np.asarray(excluded, dtype=np.int64).reshape(-1)
    if len(excluded) != l or len(np.unique(excluded)) != l:
        raise ParameterError(f"need {l} distinct excluded elements, got {excluded.tolist()}")
    if l and (excluded.min() < 0 or excluded.max() >= q):
        raise ParameterError("excluded elements outside the field")
    points = np.setdiff1d(ctx.elements, excluded)
    cfg = EvalConfig(ctx, points, vanishing_multipliers(ctx, points, excluded))
    return cfg, gtrs_code(cfg, params)


def construct_tc2(ctx: FieldCtx, k: int, t: int, h: int, eta: int, points=None):
    """Characteristic 2, v_j = (prod_{b not in points} (a_j - b))^(q/2)."""
    if ctx.p != 2 or ctx.m <= 2:
        raise WindowError("q = 2^m with m > 2", f"q={ctx.q}")
    _strict_window(ctx.q, k, t)
    params = _params(ctx, k, t, h, eta)
    points = ctx.elements.copy() if points is None else np.asarray(points, dtype=np.int64)
    if len(points) < 2 * k + t:
        raise WindowError("n >= 2k+t", f"n={len(points)} < {2 * k + t}")
    outside = np.setdiff1d(ctx.elements, points)
    cfg = EvalConfig(ctx, points, vanishing_multipliers(ctx, points, outside, half_power=True))
    return cfg, gtrs_code(cfg, params)


# condition -> (admissible t, offset c in 2k+t+c = n, description)
_CT4_CONDITIONS = {1: (lambda t: t == 1, 2, "t = 1"), 2: (lambda t: t >= 3 and t % 2, 0, "t odd >= 3"),
                   3: (lambda t: t == 2, 3, "t = 2"), 4: (lambda t: t >= 4 and t % 2 == 0, 1, "t even >= 4")}
_CT5_CONDITIONS = {1: _CT4_CONDITIONS[3], 2: _CT4_CONDITIONS[4], 3: _CT4_CONDITIONS[1], 4: _CT4_CONDITIONS[2]}


def _check_condition(table: dict, condition: int, k: int, t: int, n: int) -> None:
    if condition not in table:
        raise WindowError("condition in {1,2,3,4}", f"got {condition}")
    t_ok, offset, t_text = table[condition]
    if not t_ok(t):
        raise WindowError(f"condition ({condition}): {t_text}", f"t={t}")
    if 2 * k + t + offset != n:
        raise WindowError(f"condition ({condition}): 2k+t+{offset} = {n}", f"2k+t+{offset} = {2 * k + t + offset}")


def _check_subfield(r: int, m: int) -> None:
    if r < 3:
        raise WindowError("r >= 3", f"r={r}")
    if m % r or r >= m:
        raise WindowError("r | m and r < m", f"r={r}, m={m}")


def construct_ct4(p: int, r: int, m: int, condition: int, k: int, t: int, h: int, eta=None, eta_seed: int = 0):
    """Points all of GF(p^r) inside GF(p^m), v = 1."""
    _check_subfield(r, m)
    _check_condition(_CT4_CONDITIONS, condition, k, t, p**r)
    ctx = make_field(p, m)
    if eta is None:
        eta = sample_eta_outside_subfield(ctx, r, eta_seed)
    params = _params(ctx, k, t, h, eta)
    cfg = EvalConfig.unit(ctx, subfield_elements(ctx, r))
    return cfg, gtrs_code(cfg, params)


def construct_ct5(r: int, m: int, condition: int, k: int, t: int, h: int, eta=None, eta_seed: int = 0):
    """Points the nonzero elements of GF(2^r) inside GF(2^m), half-power product multipliers."""
    _check_subfield(r, m)
    _check_condition(_CT5_CONDITIONS, condition, k, t, 2**r - 1)
    ctx = make_field(2, m)
    if eta is None:
        eta = sample_eta_outside_subfield(ctx, r, eta_seed)
    params = _params(ctx, k, t, h, eta)
    points = subfield_elements(ctx, r)[1:]
    outside = np.setdiff1d(ctx.elements, points)
    cfg = EvalConfig(ctx, points, vanishing_multipliers(ctx, points, outside, half_power=True))
    return cfg, gtrs_code(cfg, params)


def sample_eta_outside_subfield(ctx: FieldCtx, r: int, seed: int) -> int:
    """Deterministic seeded choice from GF(p^m) minus GF(p^r)."""
    sub = subfield_elements(ctx, r)
    candidates = np.setdiff1d(ctx.elements, sub)
    if candidates.size == 0:
        raise ParameterError(f"GF({ctx.q}) has no elements outside its order-{ctx.p**r} subfield")
    return int(np.random.default_rng(seed).choice(candidates))


@dataclass
class ConstructionSpec:
    """Which construction to run and its numeric parameters."""

    which: str  # TC1 | TC2 | CT4 | CT5
    k: int
    t: int
    h: int
    q: int | None = None
    p: int | None = None
    r: int | None = None
    m: int | None = None
    eta: int | None = None
    eta_seed: int = 0
    l: int | None = None
    n: int | None = None
    condition: int | None = None

    def to_json(self) -> dict:
        return {key: getattr(self, key) for key in self.__dataclass_fields__}

    @classmethod
    def from_json(cls, d: dict) -> "ConstructionSpec":
        return cls(**d)

    def build(self, ctx: FieldCtx | None = None) -> tuple[EvalConfig, LinearCode]:
        """``ctx`` overrides the default field of order q (TC1/TC2 only)."""
        which = self.which.upper()
        if which in ("TC1", "TC2"):
            from .gf import field_from_order

            if ctx is None:
                if self.q is None:
                    raise ParameterError(f"{which} needs q")
                ctx = field_from_order(self.q)
            elif self.q is not None and self.q != ctx.q:
                raise ParameterError(f"q={self.q} disagrees with GF({ctx.q})")
            eta = self.eta if self.eta is not None else _seeded_nonzero(ctx, self.eta_seed)
            if which == "TC1":
                return construct_tc1(ctx, self.k, self.t, self.h, eta, self.l or 0)
            points = None if self.n is None else ctx.elements[: self.n]
            return construct_tc2(ctx, self.k, self.t, self.h, eta, points)
        if which == "CT4":
            return construct_ct4(self.p, self.r, self.m, self.condition, self.k, self.t, self.h,
                                 self.eta, self.eta_seed)
        if which == "CT5":
            return construct_ct5(self.r, self.m, self.condition, self.k, self.t, self.h, self.eta, self.eta_seed)
        raise ParameterError(f"unknown construction {self.which!r}")


def _seeded_nonzero(ctx: FieldCtx, seed: int) -> int:
    return int(np.random.default_rng(seed).integers(1, ctx.q))


def construction_summary(cfg: EvalConfig, code: LinearCode, params: TwistParams) -> dict:
    """Self-orthogonality plus the regime the parameters fall in."""
    ctx = cfg.ctx
    try:
        reg = regime(ctx, params.k, params.t).to_json()
    except ParameterError as exc:
        reg = {"tag": None, "inequality": str(exc)}
    return {
        "n": cfg.n,
        "k": code.k,
        "q": ctx.q,
        "self_orthogonal": is_self_orthogonal(code),
        "regime": reg,
    }


# -- randomized oracle instances ------------------------------------------


def _planted_multipliers(ctx: FieldCtx, points, params: TwistParams, rng, tries: int = 40):
    """Multipliers making the code self-orthogonal, found by sampling witnesses."""
    W = support_witness_space(ctx, points, params)
    if not W.polys:
        return None
    off = np.setdiff1d(ctx.elements, points)
    candidates = [Poly.from_roots(ctx, off)]
    for _ in range(tries):
        candidates.append(W.combine(rng.integers(0, ctx.q, size=len(W))))
    for f in candidates:
        if f.is_zero() or not in_dual_span(ctx, W, f):
            continue
        v = multipliers_from_witness(ctx, points, f)
        if v is not None:
            return v
    return None


def oracle_instances(ctx: FieldCtx, count: int, seed: int, plant: float = 0.5):
    """Seeded random (cfg, params) with 2k <= n; about ``plant`` of them aim at feasibility."""
    rng = np.random.default_rng(seed)
    q = ctx.q
    out = []
    while len(out) < count:
        k = int(rng.integers(3, q // 2 + 1))
        t = int(rng.integers(1, k))
        h = int(rng.integers(0, k - t))
        n = int(rng.integers(2 * k, q + 1))
        if k + t > n:
            continue
        params = TwistParams(k, t, h, int(rng.integers(1, q)))
        points = np.sort(rng.choice(q, size=n, replace=False))
        v = None
        if rng.random() < plant:
            v = _planted_multipliers(ctx, points, params, rng)
        if v is None:
            v = rng.integers(1, q, size=n)
        out.append((EvalConfig(ctx, points, v), params))
    return out


def oracle_agreement(cfg: EvalConfig, params: TwistParams) -> dict:
    """Solver verdict against the Gram matrix of the generated code."""
    w = theorem41_check(cfg, params)
    gram_zero = is_self_orthogonal(gtrs_code(cfg, params))
    return {"solver": w.verdict, "gram_zero": gram_zero, "agree": w.feasible == gram_zero}
