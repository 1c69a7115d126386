"""p-ary functions, their Walsh spectra, and the Condition-A test.

Functions are stored as value tables indexed by packed field-element
IDs.  The Walsh transform never touches cyclotomic objects in its inner
loop: for every ``b`` it tallies ``N_j(b) = #{x : f(x) + tr(bx) = j}`` and
only then reads ``W_f(b) = sum_j N_j(b) zeta^j`` as a :class:`CycInt`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd

import numpy as np

from . import cyclotomic as cyc
from .cyclotomic import CycInt, match_scaled_root
from .field import FieldCtx, FieldError, make_field, parse_element

REGULAR = "regular"
WEAKLY_REGULAR = "weakly-regular"
NON_WEAKLY_REGULAR = "non-weakly-regular"
NOT_BENT = "not-bent"


@dataclass(eq=False)
class PFunc:
    ctx: FieldCtx
    values: np.ndarray
    name: str = "f"
    homogeneity_exponent: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.shape != (self.ctx.q,):
            raise ValueError(f"value table must have length {self.ctx.q}")
        if self.values.size and (self.values.min() < 0 or self.values.max() >= self.ctx.p):
            raise ValueError(f"values must lie in [0, {self.ctx.p})")

    def __call__(self, x):
        out = self.values[x]
        return int(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _as_id(ctx: FieldCtx, c) -> int:
    return ctx.element(c).id


def eval_trace_poly(ctx: FieldCtx, terms) -> np.ndarray:
    """Value table of ``sum_i tr(c_i x^(d_i))``."""
    ids = np.arange(ctx.q, dtype=np.int64)
    acc = np.zeros(ctx.q, dtype=np.int64)
    for c, d in terms:
        d = int(d)
        if d < 1:
            raise ValueError(f"exponents must be >= 1, got {d}")
        acc = acc + ctx.abs_trace(ctx.mul(_as_id(ctx, c), ctx.pow(ids, d)))
    return acc % ctx.p


def catalog_trace_poly(ctx: FieldCtx, terms, name: str | None = None) -> PFunc:
    terms = list(terms)
    if name is None:
        name = "tracepoly:" + ";".join(f"{_as_id(ctx, c)},{d}" for c, d in terms)
    return PFunc(ctx, eval_trace_poly(ctx, terms), name)


def catalog_quadratic(ctx: FieldCtx, a=1) -> PFunc:
    """``f(x) = tr(a x^2)``."""
    a = _as_id(ctx, a)
    if a == 0:
        raise ValueError("quadratic coefficient must be non-zero")
    return PFunc(ctx, eval_trace_poly(ctx, [(a, 2)]), f"quadratic:a={a}", homogeneity_exponent=2)


def hk_exponent(p: int, k: int) -> int:
    return p ** (3 * k) + p ** (2 * k) - p**k + 1


def catalog_hk(ctx: FieldCtx) -> PFunc:
    """The binomial ``tr(x^2 + x^(p^3k + p^2k - p^k + 1))`` on GF(p^4k)."""
    if ctx.n % 4:
        raise ValueError(f"the binomial needs n divisible by 4, got n={ctx.n}")
    k = ctx.n // 4
    d = hk_exponent(ctx.p, k)
    assert (d - 2) % (ctx.p - 1) == 0
    f = PFunc(ctx, eval_trace_poly(ctx, [(1, 2), (1, d)]), "hk", homogeneity_exponent=2)
    ids = np.arange(ctx.q)
    for alpha in range(1, ctx.p):
        lhs = f.values[ctx.scale(alpha, ids)]
        if not np.array_equal(lhs, (alpha * alpha * f.values) % ctx.p):
            raise AssertionError("binomial is not 2-homogeneous over GF(p)")
    return f


def catalog_sporadic_ternary(ctx: FieldCtx) -> PFunc:
    """``tr(xi^7 x^98)`` on the pinned GF(3^6), ``xi`` the pinned generator."""
    if (ctx.p, ctx.n) != (3, 6) or ctx.key != make_field(3, 6).key:
        raise ValueError("the sporadic function is defined on the pinned GF(3^6) only")
    c = ctx.pow(ctx.generator, 7)
    return PFunc(ctx, eval_trace_poly(ctx, [(c, 98)]), "sporadic3_6")


def linearized_map(ctx: FieldCtx, coeffs) -> np.ndarray:
    """Table of ``L(x) = sum_i a_i x^(p^i)``."""
    ids = np.arange(ctx.q, dtype=np.int64)
    acc = np.zeros(ctx.q, dtype=np.int64)
    for i, a in enumerate(coeffs):
        a = _as_id(ctx, a)
        if a:
            acc = ctx.add(acc, ctx.mul(a, ctx.frobenius(ids, i)))
    return acc


def compose_linearized(f: PFunc, c: int, l2_coeffs) -> PFunc:
    """``g = L1 o f o L2`` with ``L1(y) = c y`` and ``L2`` linearized."""
    ctx = f.ctx
    c %= ctx.p
    if c == 0:
        raise ValueError("L1 must be a permutation of GF(p): c != 0")
    table = linearized_map(ctx, l2_coeffs)
    if np.unique(table).size != ctx.q:
        raise ValueError("L2 is not a permutation")
    values = (c * f.values[table]) % ctx.p
    return PFunc(ctx, values, f"{c}*{f.name}(L2)", f.homogeneity_exponent)


# ---------------------------------------------------------------------------
# Walsh spectrum
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class WalshSpectrum:
    ctx: FieldCtx
    counts: np.ndarray  # (q, p): counts[b, j] = #{x : f(x) + tr(bx) = j}
    is_bent: bool
    regularity: str | None = None
    mu: int | None = None
    epsilon: int | None = None
    dual: np.ndarray | None = None

    @property
    def rows(self) -> np.ndarray:
        return cyc.rows_from_counts(self.counts)

    def __getitem__(self, b: int) -> CycInt:
        return CycInt.from_counts(self.ctx.p, [int(c) for c in self.counts[b]])

    def values(self) -> list[CycInt]:
        return [self[b] for b in range(self.ctx.q)]

    @property
    def weakly_regular(self) -> bool:
        return self.regularity in (REGULAR, WEAKLY_REGULAR)


def trace_rows(ctx: FieldCtx, b) -> np.ndarray:
    """``tr(b x)`` for the given ``b`` against every ``x``; shape ``(len(b), q)``."""
    lin = (ctx.digits[np.asarray(b)] @ ctx.trace_form) % ctx.p
    return (lin.astype(np.float32) @ ctx.digits.T.astype(np.float32)).astype(np.int64) % ctx.p


def walsh_counts(f: PFunc, chunk: int = 256) -> np.ndarray:
    ctx = f.ctx
    p, q = ctx.p, ctx.q
    counts = np.empty((q, p), dtype=np.int64)
    for start in range(0, q, chunk):
        bs = np.arange(start, min(start + chunk, q))
        s = (trace_rows(ctx, bs) + f.values[None, :]) % p
        flat = s + p * np.arange(len(bs))[:, None]
        counts[bs] = np.bincount(flat.ravel(), minlength=p * len(bs)).reshape(len(bs), p)
    return counts


def walsh_transform(f: PFunc) -> WalshSpectrum:
    counts = walsh_counts(f)
    rows = cyc.rows_from_counts(counts)
    norms = cyc.rows_mul(rows, cyc.rows_conj(rows))
    q = f.ctx.q
    bent = bool(np.all(norms[:, 0] == q) and not np.any(norms[:, 1:]))
    return WalshSpectrum(f.ctx, counts, bent, None if bent else NOT_BENT)


def parseval_sum(spec: WalshSpectrum) -> int:
    rows = spec.rows
    total = cyc.rows_mul(rows, cyc.rows_conj(rows)).sum(axis=0)
    value = cyc.to_cycint(spec.ctx.p, total).as_integer()
    if value is None:
        raise AssertionError("sum of |W|^2 is not rational")
    return value


def walsh_inverse(spec: WalshSpectrum, cap: int = 729) -> np.ndarray:
    """Recover ``f`` from ``sum_b W(b) zeta^(-tr(bx)) = p^n zeta^(f(x))``.

    Entries where the sum is not of that shape are set to -1.
    """
    ctx = spec.ctx
    p, q = ctx.p, ctx.q
    if q > cap:
        raise ValueError(f"inversion over {q} elements exceeds cap {cap}")
    out = np.full(q, -1, dtype=np.int64)
    bidx = np.arange(q)[None, :]
    for start in range(0, q, 64):
        xs = np.arange(start, min(start + 64, q))
        tr = trace_rows(ctx, xs)
        full = np.stack([spec.counts[bidx, (r + tr) % p].sum(axis=1) for r in range(p)], axis=1)
        rows = cyc.rows_from_counts(full)
        for i, x in enumerate(xs):
            hit = match_scaled_root(cyc.to_cycint(p, rows[i]), q)
            if hit is not None and hit[0] == 1:
                out[x] = hit[1]
    return out


def classify_regularity(spec: WalshSpectrum) -> WalshSpectrum:
    """Sort a spectrum into regular / weakly regular / non-weakly-regular."""
    ctx = spec.ctx
    if ctx.n % 2:
        raise ValueError("regularity classification needs an even extension degree")
    if not spec.is_bent:
        return replace(spec, regularity=NOT_BENT, mu=None, epsilon=None, dual=None)
    p, k = ctx.p, ctx.n // 2
    scale = p**k
    signs, dual = set(), np.empty(ctx.q, dtype=np.int64)
    for b in range(ctx.q):
        hit = match_scaled_root(spec[b], scale)
        if hit is None:
            signs.add(None)
            break
        signs.add(hit[0])
        dual[b] = hit[1]
    if len(signs) != 1 or None in signs:
        return replace(spec, regularity=NON_WEAKLY_REGULAR, mu=None, epsilon=None, dual=None)
    eps = signs.pop()
    mu = eps * (-1) ** ((p - 1) * k // 2)
    label = REGULAR if eps == 1 else WEAKLY_REGULAR
    return replace(spec, regularity=label, mu=mu, epsilon=eps, dual=dual)


# ---------------------------------------------------------------------------
# Condition A
# ---------------------------------------------------------------------------

@dataclass
class ConditionAReport:
    f0_zero: bool
    even: bool
    homogeneous_l: int | None
    weakly_regular: bool
    epsilon: int | None
    regularity: str | None = None

    @property
    def satisfied(self) -> bool:
        return (self.f0_zero and self.even and self.homogeneous_l is not None
                and self.weakly_regular and self.epsilon is not None)


def homogeneity_exponents(f: PFunc) -> list[int]:
    """Residues ``l`` mod ``p-1`` with ``f(a x) = a^l f(x)`` for all ``a`` in GF(p)*."""
    ctx = f.ctx
    p = ctx.p
    ids = np.arange(ctx.q)
    scaled = {a: f.values[ctx.scale(a, ids)] for a in range(1, p)}
    return [l for l in range(p - 1)
            if all(np.array_equal(scaled[a], (pow(a, l, p) * f.values) % p) for a in scaled)]


def condition_a(f: PFunc, spec: WalshSpectrum | None = None) -> ConditionAReport:
    ctx = f.ctx
    if spec is None:
        spec = walsh_transform(f)
    if spec.regularity is None or (spec.is_bent and spec.epsilon is None
                                   and spec.regularity != NON_WEAKLY_REGULAR):
        spec = classify_regularity(spec)
    good_l = [l for l in homogeneity_exponents(f) if gcd(l - 1, ctx.p - 1) == 1]
    return ConditionAReport(
        f0_zero=bool(f.values[0] == 0),
        even=bool(np.array_equal(f.values[ctx.neg_table], f.values)),
        homogeneous_l=good_l[0] if good_l else None,
        weakly_regular=spec.weakly_regular,
        epsilon=spec.epsilon,
        regularity=spec.regularity,
    )


def analyze(f: PFunc) -> tuple[WalshSpectrum, ConditionAReport]:
    spec = walsh_transform(f)
    if f.ctx.n % 2 == 0:
        spec = classify_regularity(spec)
        return spec, condition_a(f, spec)
    return spec, ConditionAReport(bool(f.values[0] == 0), False, None, False, None, spec.regularity)


# ---------------------------------------------------------------------------
# dual of the binomial
# ---------------------------------------------------------------------------

@dataclass
class HKDualReport:
    checked: int
    unique_solution: int
    value_match: int
    exceptions: list[tuple[int, int, str]]

    @property
    def ok(self) -> bool:
        return not self.exceptions and self.unique_solution == self.checked == self.value_match


def hk_dual_check(f: PFunc, spec: WalshSpectrum | None = None, cap: int = 81) -> HKDualReport:
    """Brute-force the ``x_0`` of every Walsh value of the binomial.

    For each ``b`` the unique ``x_0`` in GF(p^k) solving
    ``b^(p^2k+1) + (b^2+x)^((p^2k+1)/2) + b^(p^k(p^2k+1)) + (b^2+x)^(p^k(p^2k+1)/2) = 0``
    must give ``W(b) = -p^(2k) zeta^(tr_k(x_0) / 4)``.
    """
    ctx = f.ctx
    p, n = ctx.p, ctx.n
    if n % 4:
        raise ValueError("the binomial lives on GF(p^4k)")
    k = n // 4
    if p**k > cap:
        raise ValueError(f"GF({p}^{k}) exceeds the enumeration cap {cap}")
    if spec is None:
        spec = walsh_transform(f)
    ids = np.arange(ctx.q, dtype=np.int64)
    pk, p2k = p**k, p ** (2 * k)
    e1, e2 = p2k + 1, (p2k + 1) // 2
    b_part = ctx.add(ctx.pow(ids, e1), ctx.pow(ids, pk * e1))
    bsq = ctx.mul(ids, ids)
    subfield = ctx.subfield(k)
    solutions = np.zeros(ctx.q, dtype=np.int64)
    x0 = np.full(ctx.q, -1, dtype=np.int64)
    for x in subfield:
        u = ctx.add(bsq, int(x))
        expr = ctx.add(b_part, ctx.add(ctx.pow(u, e2), ctx.pow(u, pk * e2)))
        hit = expr == 0
        solutions += hit
        x0[hit] = x
    inv4 = pow(4, -1, p)
    exceptions = []
    unique = matched = 0
    for b in range(ctx.q):
        if solutions[b] != 1:
            exceptions.append((b, int(solutions[b]), "solution count"))
            continue
        unique += 1
        t = ctx.sub_trace(int(x0[b]), k) * inv4 % p
        if match_scaled_root(spec[b], p2k) == (-1, t):
            matched += 1
        else:
            exceptions.append((b, int(x0[b]), "value mismatch"))
    return HKDualReport(ctx.q, unique, matched, exceptions)


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

def parse_function(ctx: FieldCtx, descriptor: str) -> PFunc:
    """Build a function from a CLI descriptor.

    ``quadratic[:a=<elem>]``, ``hk``, ``sporadic3_6`` or
    ``tracepoly:c1,d1;c2,d2;...`` with field elements written as base-p
    digit strings (most significant first) and decimal exponents.
    """
    head, _, rest = descriptor.strip().partition(":")
    try:
        if head == "quadratic":
            a = 1
            if rest:
                key, _, val = rest.partition("=")
                if key.strip() != "a":
                    raise ValueError(f"unknown quadratic option {key!r}")
                a = parse_element(ctx, val)
            return catalog_quadratic(ctx, a)
        if head == "hk" and not rest:
            return catalog_hk(ctx)
        if head == "sporadic3_6" and not rest:
            return catalog_sporadic_ternary(ctx)
        if head == "tracepoly":
            terms = []
            for part in filter(None, (s.strip() for s in rest.split(";"))):
                c, d = part.split(",")
                terms.append((parse_element(ctx, c), int(d)))
            return catalog_trace_poly(ctx, terms, name=descriptor.strip())
    except FieldError as exc:
        raise ValueError(str(exc)) from exc
    raise ValueError(f"unknown function descriptor {descriptor!r}")
