"""The 3-class scheme ``{0}, D, D_S, D_N`` on the additive group of GF(p^n).

Relations are Cayley-type: ``(x, y)`` lies in relation ``i`` when ``x - y``
lies in class ``i``.  Translation invariance lets :func:`verify_scheme` fix
``x = 0`` and sweep every ``y``; ``audit=True`` also sweeps ``x`` and serves
as a check on that reduction for small fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bent import PFunc, analyze
from .field import FieldCtx
from .pds import (Kind, _packed_differences, build_dset, cayley_from_indicator,
                  latin_type, level_sets, tag_set, verify_srg)

CLASS_NAMES = ("0", "D", "D_S", "D_N")
AUDIT_CAP = 81


class NotAScheme(Exception):
    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class ConditionAViolated(ValueError):
    pass


@dataclass(eq=False)
class SchemeRelations:
    ctx: FieldCtx
    labels: np.ndarray  # class index of every field element
    source: str = "f"
    epsilon: int | None = None
    tensor: np.ndarray | None = None  # tensor[i, j, k] = p_ij^k

    @property
    def sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=4).tolist()

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels == i)


def build_relations(f: PFunc, require_condition_a: bool = True) -> SchemeRelations:
    """Partition the field by the value class of ``f``.

    ``require_condition_a=False`` builds the partition anyway, which is how
    the negative control reaches :func:`verify_scheme`.
    """
    ctx = f.ctx
    spec, report = analyze(f)
    if require_condition_a and not report.satisfied:
        raise ConditionAViolated(f"{f.name} does not satisfy Condition A: {report}")
    levels = level_sets(f, spec.epsilon)
    labels = np.zeros(ctx.q, dtype=np.int64)
    for idx, kind in ((1, Kind.D), (2, Kind.D_S), (3, Kind.D_N)):
        labels[build_dset(levels, kind, f.name).members] = idx
    if labels[0] != 0 or np.any(labels[1:] == 0):
        # every non-zero element must fall in D, D_S or D_N; f(0) != 0 breaks this
        raise ValueError("classes do not partition the field")
    if not np.array_equal(labels[ctx.neg_table], labels):
        raise ValueError("classes are not closed under negation")
    return SchemeRelations(ctx, labels, f.name, spec.epsilon)


def _histograms(ctx: FieldCtx, labels: np.ndarray, x: int, chunk: int) -> np.ndarray:
    """``h[y, i, j] = #{z : x - z in class i, z - y in class j}``."""
    q = ctx.q
    ids = np.arange(q, dtype=np.int64)
    left = labels[ctx.sub(np.full(q, x, dtype=np.int64), ids)]  # class of x - z, per z
    out = np.empty((q, 4, 4), dtype=np.int64)
    for start in range(0, q, chunk):
        ys = ids[start:start + chunk]
        right = labels[_packed_differences(ctx, ids, ys)].T  # (len(ys), q): class of z - y
        code = 4 * left[None, :] + right + 16 * np.arange(len(ys))[:, None]
        out[start:start + len(ys)] = np.bincount(code.ravel(), minlength=16 * len(ys)).reshape(-1, 4, 4)
    return out


def verify_scheme(rel: SchemeRelations, audit: bool = False, chunk: int = 256) -> np.ndarray:
    """Return ``p_ij^k`` as a 4x4x4 tensor or raise :class:`NotAScheme`.

    Classes that are empty impose nothing; their slice of the tensor is 0.
    """
    ctx, labels = rel.ctx, rel.labels
    if audit and ctx.q > AUDIT_CAP:
        raise ValueError(f"full-pair audit is limited to {AUDIT_CAP} elements")
    xs = range(ctx.q) if audit else (0,)
    tensor = np.zeros((4, 4, 4), dtype=np.int64)
    seen = np.zeros(4, dtype=bool)
    for x in xs:
        hist = _histograms(ctx, labels, x, chunk)
        diff_class = labels[ctx.sub(np.full(ctx.q, x, dtype=np.int64), np.arange(ctx.q))]
        for k in range(4):
            ys = np.flatnonzero(diff_class == k)
            if len(ys) == 0:
                continue
            block = hist[ys]
            if not seen[k]:
                tensor[:, :, k] = block[0]
                seen[k] = True
            bad = np.flatnonzero(np.any(block != tensor[:, :, k], axis=(1, 2)))
            if len(bad):
                y = int(ys[bad[0]])
                i, j = np.argwhere(block[bad[0]] != tensor[:, :, k])[0]
                raise NotAScheme(
                    f"pair ({x}, {y}) in relation {CLASS_NAMES[k]}: {block[bad[0]][i, j]} "
                    f"points z with (x,z) in {CLASS_NAMES[i]} and (z,y) in {CLASS_NAMES[j]}, "
                    f"expected {tensor[i, j, k]}", (x, y, int(i), int(j)))
    rel.tensor = tensor
    return tensor


@dataclass
class Fusion:
    name: str
    classes: tuple[int, ...]
    params: tuple[int, int, int, int] | None
    latin_type: str
    error: str | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "classes": list(self.classes),
                "params": list(self.params) if self.params else None,
                "latin_type": self.latin_type, "error": self.error}


@dataclass
class AmorphicReport:
    fusions: list[Fusion]
    tag: str | None

    @property
    def amorphic(self) -> bool:
        return self.tag is not None and all(f.error is None for f in self.fusions)


def verify_amorphic(rel: SchemeRelations) -> AmorphicReport:
    """Every single class and pairwise union must give an SRG of one common type."""
    from .pds import NotSRG

    ctx = rel.ctx
    picks = [(i,) for i in (1, 2, 3)] + list(combinations((1, 2, 3), 2))
    fusions = []
    for classes in picks:
        name = "+".join(CLASS_NAMES[i] for i in classes)
        ind = np.isin(rel.labels, classes)
        g = cayley_from_indicator(ctx, ind, f"{rel.source}/{name}")
        try:
            s = verify_srg(g)
        except NotSRG as exc:
            fusions.append(Fusion(name, classes, None, "neither", str(exc)))
            continue
        fusions.append(Fusion(name, classes, s.astuple(), latin_type(*s.astuple())))
    common = set.intersection(*(tag_set(f.latin_type) for f in fusions))
    if not common:
        tag = None
    elif len(common) == 2:
        tag = "both"
    else:
        tag = common.pop()
    return AmorphicReport(fusions, tag)


def scheme_report(rel: SchemeRelations, amorphic: AmorphicReport | None) -> dict:
    return {
        "function": rel.source,
        "field": {"p": rel.ctx.p, "n": rel.ctx.n},
        "classes": rel.sizes,
        "tensor": rel.tensor.tolist() if rel.tensor is not None else None,
        "amorphic": bool(amorphic and amorphic.amorphic),
        "latin_type": amorphic.tag if amorphic else None,
        "fusions": [f.to_dict() for f in amorphic.fusions] if amorphic else [],
    }
