"""Brute-force group-ring arithmetic in Z[zeta_p][G], G = (GF(p^n), +).

Elements are dense: one canonical cyclotomic row per field element.
Convolution costs Theta(q^2) row products, so it is capped; it is an
oracle for identities, not a scalable kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from . import cyclotomic as cyc
from .cyclotomic import CycInt
from .field import FieldCtx, make_field, quad_classes

DEFAULT_CAP = 625
HARD_CAP = 6561


class CapExceeded(RuntimeError):
    pass


@dataclass(eq=False)
class GrpElem:
    ctx: FieldCtx
    coeffs: np.ndarray  # shape (q, p-1)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)
        if self.coeffs.shape != (self.ctx.q, self.ctx.p - 1):
            raise ValueError(f"expected shape {(self.ctx.q, self.ctx.p - 1)}, got {self.coeffs.shape}")

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, ctx: FieldCtx) -> "GrpElem":
        return cls(ctx, np.zeros((ctx.q, ctx.p - 1), dtype=np.int64))

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "GrpElem":
        out = cls.zero(ctx)
        out.coeffs[0, 0] = 1
        return out

    @classmethod
    def whole_group(cls, ctx: FieldCtx) -> "GrpElem":
        out = cls.zero(ctx)
        out.coeffs[:, 0] = 1
        return out

    def __getitem__(self, g: int) -> CycInt:
        return cyc.to_cycint(self.ctx.p, self.coeffs[g])

    def support(self) -> np.ndarray:
        return np.flatnonzero(np.any(self.coeffs != 0, axis=1))

    def is_integral(self) -> bool:
        return not np.any(self.coeffs[:, 1:])

    # -- ring operations -----------------------------------------------------
    def _check(self, other: "GrpElem") -> None:
        if other.ctx.key != self.ctx.key:
            raise ValueError("group-ring elements over different fields")

    def __add__(self, other: "GrpElem") -> "GrpElem":
        self._check(other)
        return GrpElem(self.ctx, self.coeffs + other.coeffs)

    def __sub__(self, other: "GrpElem") -> "GrpElem":
        self._check(other)
        return GrpElem(self.ctx, self.coeffs - other.coeffs)

    def __neg__(self) -> "GrpElem":
        return GrpElem(self.ctx, -self.coeffs)

    def scale(self, c) -> "GrpElem":
        """Multiply every coefficient by an integer or a :class:`CycInt`."""
        if isinstance(c, CycInt):
            return GrpElem(self.ctx, cyc.rows_mul(np.asarray(c.coeffs), self.coeffs))
        return GrpElem(self.ctx, int(c) * self.coeffs)

    def __mul__(self, other):
        if isinstance(other, GrpElem):
            return convolve(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrpElem):
            return NotImplemented
        return self.ctx.key == other.ctx.key and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        return f"GrpElem(GF({self.ctx.p}^{self.ctx.n}), support={len(self.support())})"


def from_subset(ctx: FieldCtx, members) -> GrpElem:
    out = GrpElem.zero(ctx)
    members = np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=np.int64)
    out.coeffs[members, 0] = 1
    return out


def convolve(a: GrpElem, b: GrpElem, cap: int = DEFAULT_CAP) -> GrpElem:
    """``(a*b)[g] = sum_h a[h] b[g - h]``."""
    a._check(b)
    ctx = a.ctx
    if ctx.q > min(cap, HARD_CAP):
        raise CapExceeded(f"convolution over {ctx.q} elements exceeds cap {cap}")
    bound = int(np.abs(a.coeffs).max(initial=0)) * int(np.abs(b.coeffs).max(initial=0))
    if bound * ctx.q * ctx.p * 2 >= 2**62:
        raise OverflowError("coefficients too large for int64 convolution")
    ids = np.arange(ctx.q, dtype=np.int64)
    out = np.zeros_like(b.coeffs)
    integral = a.is_integral()
    for h in a.support():
        shifted = b.coeffs[ctx.sub(ids, int(h))]
        if integral:
            out += a.coeffs[h, 0] * shifted
        else:
            out += cyc.rows_mul(a.coeffs[h], shifted)
    return GrpElem(ctx, out)


def inverse_support(a: GrpElem, conjugate_coefficients: bool = False) -> GrpElem:
    """``a^(-1)``: coefficient at ``g`` becomes that of ``-g``."""
    coeffs = a.coeffs[a.ctx.neg_table]
    if conjugate_coefficients:
        coeffs = cyc.rows_conj(coeffs)
    return GrpElem(a.ctx, coeffs)


def build_Lt(levels, t: int) -> GrpElem:
    """``L_t = sum_i D_i zeta^(i t)``: coefficient ``zeta^(t f(x))`` at ``x``.

    ``levels`` is anything carrying ``ctx`` and the value table ``values``
    (a :class:`bentsrg.pds.LevelSets` or a :class:`bentsrg.bent.PFunc`).
    """
    ctx = levels.ctx
    return GrpElem(ctx, cyc.rows_root_powers(ctx.p, t * np.asarray(levels.values)))


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    checks: dict[str, bool] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool) -> None:
        self.checks[name] = bool(ok)


def prime_group_identities(p: int) -> IdentityReport:
    """Square/non-square identities in Z[GF(p)] and Z[zeta_p]."""
    if p > 101:
        raise ValueError("p must be at most 101")
    F = make_field(p, 1)
    qc = quad_classes(p)
    S = from_subset(F, qc.squares)
    T = from_subset(F, qc.nonsquares)
    one = GrpElem.identity(F)
    G = GrpElem.whole_group(F)
    cap = max(p, DEFAULT_CAP)
    rep = IdentityReport()

    SS, TT, ST, TS = (convolve(x, y, cap) for x, y in ((S, S), (T, T), (S, T), (T, S)))
    if p % 4 == 1:
        rep.record("S^2", SS == one * ((p - 1) // 2) + S * ((p - 5) // 4) + T * ((p - 1) // 4))
        rep.record("T^2", TT == one * ((p - 1) // 2) + S * ((p - 1) // 4) + T * ((p - 5) // 4))
        rep.record("ST", ST == (S + T) * ((p - 1) // 4))
        rep.record("-1 is a square", (p - 1) in qc.squares)
    else:
        rep.record("S^2", SS == S * ((p - 3) // 4) + T * ((p + 1) // 4))
        rep.record("T^2", TT == S * ((p + 1) // 4) + T * ((p - 3) // 4))
        rep.record("ST", ST == one * ((p + 1) // 4) + G * ((p - 3) // 4))
        rep.record("-1 is a square", (p - 1) not in qc.squares)
    rep.record("TS", TS == ST)

    m = sum((cyc.root_power(p, -i) for i in qc.squares), CycInt.zero(p))
    val = (-m * (1 + m)).as_integer()
    expected = -(p - 1) // 4 if p % 4 == 1 else (p + 1) // 4
    rep.record("-m(1+m)", val == expected)
    return rep


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sigma(s: int, t: int, l: int, p: int) -> int | None:
    """The ``v`` with ``s^(1-l) + t^(1-l) = v^(1-l)`` in GF(p), if unique."""
    e = (1 - l) % (p - 1)
    target = (pow(s, e, p) + pow(t, e, p)) % p
    hits = [v for v in range(1, p) if pow(v, e, p) == target]
    return hits[0] if len(hits) == 1 else None


def check_level_products(levels, mu: int, l: int, cap: int = DEFAULT_CAP) -> IdentityReport:
    """Products of the ``L_t`` elements of an even-degree bent function.

    ``mu`` is the sign with ``W_f(b) = mu (p*)^(n/2) zeta^(f*(b))``; ``l`` is
    the homogeneity exponent.
    """
    ctx = levels.ctx
    p, n = ctx.p, ctx.n
    if n % 2:
        raise ValueError("only even extension degrees are supported")
    if gcd(l - 1, p - 1) != 1:
        raise ValueError(f"gcd(l-1, p-1) != 1 for l={l}")
    L = [build_Lt(levels, t) for t in range(p)]
    one = GrpElem.identity(ctx)
    G = GrpElem.whole_group(ctx)
    rep = IdentityReport()
    rep.record("L_0 = G", L[0] == G)

    pstar = p if p % 4 == 1 else -p
    root_pstar_n = pstar ** (n // 2)
    for t in range(1, p):
        for s in range(1, p):
            if (s + t) % p == 0:
                continue
            v = sigma(s, t, l, p)
            if v is None:
                continue
            coef = mu * legendre(t * s * v, p) ** n * root_pstar_n
            rep.record(f"L_{t} L_{s} = c L_{v}", convolve(L[t], L[s], cap) == L[v] * coef)

    for t in range(1, p):
        rep.record(f"L_{t} L_{-t % p} = p^n", convolve(L[t], L[(-t) % p], cap) == one * p**n)

    values = np.asarray(levels.values)
    LtL0 = [convolve(L[t], L[0], cap) for t in range(1, p)]
    for a in range(p):
        lhs = GrpElem.zero(ctx)
        for t, prod in zip(range(1, p), LtL0):
            lhs = lhs + prod.scale(cyc.root_power(p, -a * t))
        size = int(np.count_nonzero(values == a))
        rep.record(f"sum_t L_t L_0 zeta^(-{a}t)", lhs == G * (p * size - p**n))
    return rep


def verify_pds_equation(ctx: FieldCtx, members, v: int, k: int, lam: int, mu: int,
                        cap: int = DEFAULT_CAP) -> bool:
    """Check ``D D^(-1) = (k - mu) 1 + (lam - mu) D + mu G`` coefficientwise."""
    if v != ctx.q:
        return False
    D = from_subset(ctx, members)
    if int(D.coeffs[:, 0].sum()) != k:
        return False
    lhs = convolve(D, inverse_support(D), cap)
    rhs = GrpElem.identity(ctx) * (k - mu) + D * (lam - mu) + GrpElem.whole_group(ctx) * mu
    return lhs == rhs
