"""Level sets, the four difference sets, predicted parameters, Cayley graphs.

Vertex IDs are the packed field-element encoding, so graphs and exports
are reproducible for a fixed modulus.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt

import numpy as np

from .bent import PFunc, analyze, catalog_quadratic
from .field import FieldCtx, quad_classes


class Kind(str, Enum):
    D = "D"
    D_S = "D_S"
    D_Sprime = "D_Sprime"
    D_N = "D_N"


class NotAPDS(Exception):
    """Difference counts are not constant on D or off D."""

    def __init__(self, witness: int, count: int, expected: int, on_set: bool):
        where = "in D" if on_set else "outside D"
        super().__init__(f"element {witness} {where} has {count} representations, expected {expected}")
        self.witness, self.count, self.expected, self.on_set = witness, count, expected, on_set


class NotSRG(Exception):
    def __init__(self, message: str, witness: tuple[int, ...] = ()):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class LevelSets:
    ctx: FieldCtx
    values: np.ndarray
    members: list[np.ndarray]
    epsilon: int | None = None
    sizes_ok: bool | None = None

    @property
    def sizes(self) -> list[int]:
        return [len(m) for m in self.members]


@dataclass(eq=False)
class DSet:
    ctx: FieldCtx
    kind: Kind
    members: np.ndarray
    source: str
    epsilon: int | None = None

    def __len__(self) -> int:
        return len(self.members)

    def indicator(self) -> np.ndarray:
        ind = np.zeros(self.ctx.q, dtype=bool)
        ind[self.members] = True
        return ind


@dataclass(frozen=True)
class PdsParams:
    v: int
    d: int
    lambda1: int
    lambda2: int
    latin_type: str = "neither"

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.d, self.lambda1, self.lambda2)

    def to_dict(self) -> dict:
        return asdict(self)

    def agrees_with(self, other: "PdsParams") -> bool:
        # lambda1 counts pairs inside D, so it is vacuous for an empty D
        if (self.v, self.d, self.lambda2) != (other.v, other.d, other.lambda2):
            return False
        return self.d == 0 or self.lambda1 == other.lambda1


def latin_type(v: int, d: int, lambda1: int, lambda2: int) -> str:
    """Tag ``(n^2, r(n+e), -e n + r^2 + 3 e r, r^2 + e r)`` shapes.

    ``e = -1`` is Latin square type, ``e = +1`` negative Latin square type.
    Returns ``"both"`` when both shapes fit (e.g. Paley(9), or an empty set).
    Vacuous counts (empty set, complete graph) are not constraints.
    """
    n = isqrt(v)
    if n * n != v:
        return "neither"
    tags = []
    for e, name in ((1, "negative-Latin"), (-1, "Latin")):
        if n + e == 0 or d % (n + e):
            continue
        r = d // (n + e)
        # lambda1 is vacuous for an empty set, lambda2 for a complete graph
        lam_ok = d == 0 or lambda1 == -e * n + r * r + 3 * e * r
        mu_ok = d == v - 1 or lambda2 == r * r + e * r
        if lam_ok and mu_ok:
            tags.append(name)
    if len(tags) == 2:
        return "both"
    return tags[0] if tags else "neither"


def tag_set(tag: str) -> set[str]:
    return {"both": {"Latin", "negative-Latin"}, "neither": set()}.get(tag, {tag})


# ---------------------------------------------------------------------------
# sets
# ---------------------------------------------------------------------------

def level_sizes(p: int, k: int, epsilon: int) -> tuple[int, int]:
    """Sizes of the zero level and of each non-zero level."""
    d0 = p ** (2 * k - 1) + epsilon * (p**k - p ** (k - 1))
    di = p ** (2 * k - 1) - epsilon * p ** (k - 1)
    return d0, di


def level_sets(f: PFunc, epsilon: int | None = None) -> LevelSets:
    ctx = f.ctx
    members = [np.flatnonzero(f.values == i) for i in range(ctx.p)]
    sizes_ok = None
    if epsilon is not None and ctx.n % 2 == 0:
        d0, di = level_sizes(ctx.p, ctx.n // 2, epsilon)
        sizes = [len(m) for m in members]
        sizes_ok = sizes[0] == d0 and all(s == di for s in sizes[1:])
    return LevelSets(ctx, f.values, members, epsilon, sizes_ok)


def build_dset(levels: LevelSets, kind: Kind | str, source: str = "f") -> DSet:
    kind = Kind(kind)
    ctx = levels.ctx
    qc = quad_classes(ctx.p)
    wanted = {
        Kind.D: (0,),
        Kind.D_S: qc.squares,
        Kind.D_Sprime: (0,) + qc.squares,
        Kind.D_N: qc.nonsquares,
    }[kind]
    members = np.sort(np.concatenate([levels.members[i] for i in wanted]))
    members = members[members != 0]
    return DSet(ctx, kind, members, source, levels.epsilon)


def predict_params(kind: Kind | str, p: int, k: int, epsilon: int) -> PdsParams:
    """Closed-form ``(v, d, lambda1, lambda2)`` on GF(p^2k).

    ``k`` is half the extension degree.
    """
    kind = Kind(kind)
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    e = Fraction(epsilon)
    P, P1 = Fraction(p**k), Fraction(p ** (k - 1))
    if kind is Kind.D:
        d = (P - e) * (P1 + e)
        l1 = (P1 + e) ** 2 - 3 * e * (P1 + e) + e * P
        l2 = (P1 + e) * P1
    elif kind in (Kind.D_S, Kind.D_N):
        a = P - P1
        d = a * (P - e) / 2
        l1 = a * a / 4 - 3 * e * a / 2 + P * e
        l2 = a / 2 * (a / 2 - e)
    else:
        a = P + P1 + 2 * e
        d = a * (P - e) / 2
        l1 = a * a / 4 - 3 * e * a / 2 + P * e
        l2 = (P + P1) * a / 4
    vals = [d, l1, l2]
    assert all(x.denominator == 1 for x in vals), f"non-integral parameters {vals}"
    d, l1, l2 = (int(x) for x in vals)
    v = p ** (2 * k)
    return PdsParams(v, d, l1, l2, latin_type(v, d, l1, l2))


def _packed_differences(ctx: FieldCtx, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``left[:, None] - right[None, :]`` as packed IDs."""
    acc = np.zeros((len(left), len(right)), dtype=np.int64)
    for i in range(ctx.n):
        dl = ctx.digits[left, i]
        dr = ctx.digits[right, i]
        acc += ((dl[:, None] - dr[None, :]) % ctx.p) * int(ctx.powers[i])
    return acc


def difference_counts(ctx: FieldCtx, members: np.ndarray) -> np.ndarray:
    """``counts[g] = #{(x, y) in D^2 : x - y = g}``; ``counts[0] = |D|``."""
    members = np.asarray(members, dtype=np.int64)
    counts = np.zeros(ctx.q, dtype=np.int64)
    if len(members) == 0:
        return counts
    chunk = max(1, 2**21 // len(members))
    for start in range(0, len(members), chunk):
        diffs = _packed_differences(ctx, members[start:start + chunk], members)
        counts += np.bincount(diffs.ravel(), minlength=ctx.q)
    return counts


def verify_pds_counting(dset: DSet) -> tuple[int, int]:
    """Exhaustive difference counting; returns ``(lambda1, lambda2)``.

    Raises :class:`NotAPDS` with a witness when a count is not constant.
    """
    ctx = dset.ctx
    counts = difference_counts(ctx, dset.members)
    ind = dset.indicator()
    if ind[0]:
        raise ValueError("0 must not be in D")
    lam = mu = 0
    on = dset.members
    if len(on):
        lam = int(counts[on[0]])
        bad = on[counts[on] != lam]
        if len(bad):
            raise NotAPDS(int(bad[0]), int(counts[bad[0]]), lam, True)
    off = np.flatnonzero(~ind)
    off = off[off != 0]
    if len(off):
        mu = int(counts[off[0]])
        bad = off[counts[off] != mu]
        if len(bad):
            raise NotAPDS(int(bad[0]), int(counts[bad[0]]), mu, False)
    return lam, mu


def counted_params(dset: DSet) -> PdsParams:
    lam, mu = verify_pds_counting(dset)
    v, d = dset.ctx.q, len(dset)
    return PdsParams(v, d, lam, mu, latin_type(v, d, lam, mu))


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Graph:
    adjacency: np.ndarray  # bool, symmetric, zero diagonal
    provenance: str = ""

    @property
    def v(self) -> int:
        return self.adjacency.shape[0]

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``u < v``, sorted."""
        u, w = np.nonzero(np.triu(self.adjacency, 1))
        return np.stack([u, w], axis=1)

    def relabel(self, perm: np.ndarray) -> "Graph":
        """Graph with vertex ``i`` renamed ``perm[i]``."""
        inv = np.argsort(perm)
        return Graph(self.adjacency[np.ix_(inv, inv)], self.provenance)


def cayley_graph(dset: DSet, chunk: int = 256) -> Graph:
    """Vertices GF(p^n); ``x ~ y`` iff ``x - y`` lies in D."""
    ctx = dset.ctx
    return cayley_from_indicator(ctx, dset.indicator(),
                                 f"{dset.source}/{dset.kind.value}/GF({ctx.p}^{ctx.n})", chunk)


def cayley_from_indicator(ctx: FieldCtx, ind: np.ndarray, provenance: str = "",
                          chunk: int = 256) -> Graph:
    if ind[0]:
        raise ValueError("0 must not be in D")
    if not np.array_equal(ind[ctx.neg_table], ind):
        raise ValueError("D must be closed under negation")
    ids = np.arange(ctx.q, dtype=np.int64)
    adj = np.empty((ctx.q, ctx.q), dtype=bool)
    for start in range(0, ctx.q, chunk):
        rows = ids[start:start + chunk]
        adj[rows] = ind[_packed_differences(ctx, rows, ids)]
    return Graph(adj, provenance)


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)


def verify_srg(g: Graph, chunk: int = 512, max_vertices: int = 7000) -> SrgParams:
    """Common-neighbour counting over every vertex pair.

    Vacuous counts (no adjacent or no non-adjacent pairs) are reported as 0.
    """
    A = g.adjacency
    v = g.v
    if v > max_vertices:
        raise ValueError(f"{v} vertices exceeds the limit {max_vertices}")
    if not np.array_equal(A, A.T) or np.any(np.diag(A)):
        raise NotSRG("adjacency is not symmetric or has loops")
    deg = g.degrees()
    if np.any(deg != deg[0]):
        i = int(np.flatnonzero(deg != deg[0])[0])
        raise NotSRG(f"not regular: vertex {i} has degree {deg[i]}, vertex 0 has {deg[0]}", (i,))
    k = int(deg[0])
    Af = A.astype(np.float32)
    lam = mu = None
    for start in range(0, v, chunk):
        stop = min(start + chunk, v)
        common = (Af[start:stop] @ Af).astype(np.int64)
        block = A[start:stop]
        off = ~block
        off[np.arange(stop - start), np.arange(start, stop)] = False
        for mask, name in ((block, "adjacent"), (off, "non-adjacent")):
            vals = common[mask]
            if vals.size == 0:
                continue
            ref = lam if name == "adjacent" else mu
            if ref is None:
                ref = int(vals[0])
            bad = np.flatnonzero(vals != ref)
            if len(bad):
                r, c = np.nonzero(mask)
                raise NotSRG(f"{name} pair ({start + r[bad[0]]}, {c[bad[0]]}) has "
                             f"{vals[bad[0]]} common neighbours, expected {ref}",
                             (int(start + r[bad[0]]), int(c[bad[0]])))
            if name == "adjacent":
                lam = ref
            else:
                mu = ref
    return SrgParams(v, k, lam or 0, mu or 0)


def affine_polar_baseline(ctx: FieldCtx) -> tuple[DSet, DSet]:
    """``M`` and ``M'`` from the quadratic form ``tr(x^2)``."""
    if ctx.n % 2:
        raise ValueError("need an even extension degree")
    f = catalog_quadratic(ctx, 1)
    spec, _ = analyze(f)
    levels = level_sets(f, spec.epsilon)
    return (build_dset(levels, Kind.D_S, "affine-polar"),
            build_dset(levels, Kind.D_Sprime, "affine-polar"))


def pds_report(f: PFunc, kind: Kind | str, predicted: PdsParams | None,
               counted: tuple[int, int] | None, verdict: str, witness=None) -> dict:
    ctx = f.ctx
    out = {
        "function": f.name,
        "field": {"p": ctx.p, "n": ctx.n, "modulus": list(ctx.modulus)},
        "kind": Kind(kind).value,
        "predicted": predicted.to_dict() if predicted else None,
        "counted": {"lambda1": counted[0], "lambda2": counted[1]} if counted else None,
        "verdict": verdict,
    }
    if witness is not None:
        out["witness"] = witness
    return out
