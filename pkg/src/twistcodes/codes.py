"""Linear codes as row spaces over GF(q)."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .gf import FieldCtx
from .linalg import as_matrix, batched_full_rank, gram, matrix_hash, nullspace, rank, row_space_contains, rref

EXHAUSTIVE_LIMIT = 10**8
SUBSET_SCAN_LIMIT = 2 * 10**6
_BLOCK_ROWS = 1 << 15


class CodeSizeError(ValueError):
    """Instance too large for the requested distance strategy."""


@dataclass(frozen=True, eq=False)
class LinearCode:
    ctx: FieldCtx
    gen: np.ndarray  # RREF basis, k x n

    @property
    def n(self) -> int:
        return int(self.gen.shape[1])

    @property
    def k(self) -> int:
        return int(self.gen.shape[0])

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "LinearCode":
        return cls(ctx, np.zeros((0, n), dtype=np.int64))

    @classmethod
    def full(cls, ctx: FieldCtx, n: int) -> "LinearCode":
        return cls(ctx, np.eye(n, dtype=np.int64))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearCode)
            and other.ctx == self.ctx
            and np.array_equal(self.gen, other.gen)
        )

    def __hash__(self) -> int:
        return hash((self.ctx.spec, matrix_hash(self.gen)))

    def contains(self, other: "LinearCode") -> bool:
        return row_space_contains(self.ctx, self.gen, other.gen)

    def contains_vector(self, v) -> bool:
        return row_space_contains(self.ctx, self.gen, as_matrix(v))

    def encode(self, msg) -> np.ndarray:
        return self.ctx.matmul(as_matrix(msg), self.gen)

    def to_json(self) -> dict:
        return {
            "q": self.ctx.q,
            "p": self.ctx.p,
            "m": self.ctx.m,
            "n": self.n,
            "k": self.k,
            "generator": self.gen.tolist(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "LinearCode":
        from .gf import make_field

        ctx = make_field(d["p"], d["m"])
        rows = d["generator"]
        return from_generators(ctx, rows) if rows else cls.zero(ctx, d["n"])

    def __repr__(self) -> str:
        return f"LinearCode([{self.n},{self.k}] over GF({self.ctx.q}))"


def from_generators(ctx: FieldCtx, rows) -> LinearCode:
    A = as_matrix(rows)
    if A.shape[0] == 0:
        raise ValueError("no generator rows given")
    if A.size and (A.min() < 0 or A.max() >= ctx.q):
        raise ValueError(f"entries outside GF({ctx.q})")
    R, _ = rref(ctx, A)
    return LinearCode(ctx, R)


def dual(C: LinearCode) -> LinearCode:
    if C.k == 0:
        return LinearCode.full(C.ctx, C.n)
    N = nullspace(C.ctx, C.gen)
    if N.shape[0] == 0:
        return LinearCode.zero(C.ctx, C.n)
    return LinearCode(C.ctx, rref(C.ctx, N)[0])


def _check_compatible(C1: LinearCode, C2: LinearCode) -> None:
    if C1.ctx != C2.ctx:
        raise ValueError("codes over different fields")
    if C1.n != C2.n:
        raise ValueError(f"length mismatch: {C1.n} vs {C2.n}")


def schur_product(C1: LinearCode, C2: LinearCode) -> LinearCode:
    _check_compatible(C1, C2)
    if C1.k == 0 or C2.k == 0:
        return LinearCode.zero(C1.ctx, C1.n)
    prods = C1.ctx.mul(C1.gen[:, None, :], C2.gen[None, :, :]).reshape(-1, C1.n)
    return LinearCode(C1.ctx, rref(C1.ctx, prods)[0])


def schur_square(C: LinearCode) -> LinearCode:
    if C.k == 0:
        return C
    i, j = np.triu_indices(C.k)
    prods = C.ctx.mul(C.gen[i], C.gen[j])
    return LinearCode(C.ctx, rref(C.ctx, prods)[0])


def is_self_orthogonal(C: LinearCode) -> bool:
    if C.k == 0:
        return True
    return not gram(C.ctx, C.gen).any()


# -- minimum distance ----------------------------------------------------


@dataclass
class DistanceReport:
    """Outcome of a distance computation.

    ``d`` is exact when known.  A failed minor-scan leaves ``d`` as None and
    records the bound ``d <= n-k`` witnessed by ``certificate``.
    """

    d: int | None
    method: str
    n: int
    k: int
    upper: int
    lower: int
    certificate: dict = field(default_factory=dict)

    @property
    def is_mds(self) -> bool:
        return self.lower == self.n - self.k + 1

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "method": self.method,
            "n": self.n,
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "certificate": self.certificate,
        }


def _span_table(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray:
    S = np.zeros((1, rows.shape[1]), dtype=np.int64)
    for row in rows:
        S = ctx.add(S[None, :, :], ctx.mul(ctx.elements[:, None, None], row[None, None, :]))
        S = S.reshape(-1, rows.shape[1])
    return S


def _iter_span(ctx: FieldCtx, rows: np.ndarray):
    """Yield blocks of codewords covering the span of ``rows`` exactly once."""
    r, n = rows.shape
    if r == 0:
        yield np.zeros((1, n), dtype=np.int64)
        return
    inner = 0
    while inner < r and ctx.q ** (inner + 1) <= _BLOCK_ROWS:
        inner += 1
    inner = max(inner, 1)
    table = _span_table(ctx, rows[r - inner :])
    outer = rows[: r - inner]
    for coeffs in itertools.product(range(ctx.q), repeat=outer.shape[0]):
        offset = np.zeros(n, dtype=np.int64)
        for c, row in zip(coeffs, outer):
            if c:
                offset = ctx.add(offset, ctx.mul(row, c))
        yield ctx.add(table, offset[None, :])


def exhaustive_distance(C: LinearCode) -> DistanceReport:
    """Minimum weight over one representative per projective point."""
    ctx, G = C.ctx, C.gen
    n, k = C.n, C.k
    if k == 0:
        return DistanceReport(None, "exhaustive", n, 0, n + 1, n + 1, {"note": "zero code"})
    if ctx.q**k > EXHAUSTIVE_LIMIT:
        raise CodeSizeError(f"q^k = {ctx.q}^{k} exceeds {EXHAUSTIVE_LIMIT}")
    best, witness = n + 1, None
    for lead in range(k):
        base = G[lead]
        for block in _iter_span(ctx, G[lead + 1 :]):
            words = ctx.add(block, base[None, :])
            wts = np.count_nonzero(words, axis=1)
            i = int(np.argmin(wts))
            if wts[i] < best:
                best, witness = int(wts[i]), words[i].tolist()
    return DistanceReport(best, "exhaustive", n, k, best, best, {"codeword": witness})


def _iter_subsets(n: int, s: int, chunk: int = 20000):
    it = itertools.combinations(range(n), s)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def first_dependent_columns(ctx: FieldCtx, M: np.ndarray, s: int) -> list[int] | None:
    """First s-subset of columns of M (lexicographic) that is linearly dependent."""
    if s == 0:
        return None
    if s > M.shape[0]:
        return list(range(s))
    for sel in _iter_subsets(M.shape[1], s):
        blocks = np.transpose(M[:, sel], (1, 2, 0))  # (S, s, rows)
        ok = batched_full_rank(ctx, blocks)
        if not ok.all():
            return sel[int(np.argmin(ok))].tolist()
    return None


def _zero_on(C: LinearCode, cols: list[int]) -> np.ndarray:
    """A nonzero codeword vanishing on ``cols`` (needs G[:, cols] rank-deficient)."""
    N = nullspace(C.ctx, C.gen[:, cols].T)
    return C.ctx.matmul(N[:1], C.gen)[0]


def minor_scan(C: LinearCode) -> DistanceReport:
    """Decide MDS by checking every k-column selection is nonsingular."""
    n, k = C.n, C.k
    if math.comb(n, k) > SUBSET_SCAN_LIMIT:
        raise CodeSizeError(f"C({n},{k}) selections exceed {SUBSET_SCAN_LIMIT}")
    bad = first_dependent_columns(C.ctx, C.gen, k)
    if bad is None:
        return DistanceReport(
            n - k + 1, "minor-scan", n, k, n - k + 1, n - k + 1,
            {"selections_checked": math.comb(n, k)},
        )
    word = _zero_on(C, bad)
    return DistanceReport(
        None, "minor-scan", n, k, n - k, 1,
        {"singular_columns": bad, "codeword": word.tolist(), "weight": int(np.count_nonzero(word))},
    )


def min_distance(C: LinearCode, strategy: str = "auto") -> DistanceReport:
    if strategy not in ("auto", "exhaustive", "minor-scan"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "auto":
        strategy = "exhaustive" if C.ctx.q**C.k <= EXHAUSTIVE_LIMIT else "minor-scan"
    if strategy == "exhaustive":
        return exhaustive_distance(C)
    return minor_scan(C)


def distance_at_least(C: LinearCode, s: int) -> bool:
    """d(C) >= s, decided by column independence of a parity-check matrix."""
    if s <= 1:
        return True
    H = dual(C).gen
    if s - 1 > H.shape[0]:
        return False
    if math.comb(C.n, s - 1) > SUBSET_SCAN_LIMIT:
        raise CodeSizeError(f"C({C.n},{s - 1}) column subsets exceed {SUBSET_SCAN_LIMIT}")
    return first_dependent_columns(C.ctx, H, s - 1) is None


class CodeClass(str, Enum):
    MDS = "MDS"
    NMDS = "NMDS"
    OTHER = "OTHER"


@dataclass
class Classification:
    tag: CodeClass
    d: int | None
    dual_d: int | None
    n: int
    k: int
    method: str
    dual_status: str = "checked"
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "class": self.tag.value,
            "d": self.d,
            "dual_d": self.dual_d,
            "n": self.n,
            "k": self.k,
            "method": self.method,
            "dual_status": self.dual_status,
            "certificate": self.certificate,
        }


def classify(C: LinearCode, strategy: str = "auto") -> Classification:
    n, k = C.n, C.k
    rep = min_distance(C, strategy)
    if rep.is_mds:
        return Classification(CodeClass.MDS, n - k + 1, k + 1, n, k, rep.method, "implied", rep.certificate)
    if rep.d is None:
        # d <= n-k is witnessed; settle d == n-k via parity-check columns
        d = n - k if distance_at_least(C, n - k) else None
        method = rep.method + "+column-scan"
    else:
        d, method = rep.d, rep.method
    cert = dict(rep.certificate)
    if d != n - k:
        return Classification(CodeClass.OTHER, d, None, n, k, method, "not needed", cert)
    D = dual(C)
    if C.ctx.q**D.k <= EXHAUSTIVE_LIMIT:
        drep = exhaustive_distance(D)
        dual_d, status = drep.d, "checked"
        cert["dual_codeword"] = drep.certificate.get("codeword")
    else:
        # the dual is not MDS (C is not), so d_perp <= k; test d_perp >= k
        dual_d = k if distance_at_least(D, k) else None
        status = "checked (column-scan)"
    tag = CodeClass.NMDS if dual_d == k else CodeClass.OTHER
    return Classification(tag, d, dual_d, n, k, method, status, cert)


def non_grs_certificate(C: LinearCode) -> int | None:
    """dim(C^2) when it is >= 2k (no GRS code of this k has that), else None."""
    if not 2 * C.k < C.n + 1:
        raise ValueError(f"needs k < (n+1)/2, got n={C.n}, k={C.k}")
    dim = schur_square(C).k
    return dim if dim >= 2 * C.k else None
