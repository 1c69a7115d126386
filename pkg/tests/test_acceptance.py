"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

from bentsrg.bent import (NON_WEAKLY_REGULAR, analyze, compose_linearized, hk_dual_check,
                          linearized_map, parse_function, parseval_sum, walsh_inverse, walsh_transform)
from bentsrg.cli import reproduce_tables
from bentsrg.field import make_field
from bentsrg.graphio import from_graph6
from bentsrg.groupring import check_level_products, prime_group_identities, verify_pds_equation
from bentsrg.pds import (Kind, NotAPDS, affine_polar_baseline, build_dset, cayley_graph, counted_params,
                         level_sets, predict_params, tag_set, verify_pds_counting)
from bentsrg.ranklab import from_graph, rank
from bentsrg.scheme import build_relations, verify_amorphic, verify_scheme

_FIELDS: dict = {}


def field(p, n):
    if (p, n) not in _FIELDS:
        _FIELDS[(p, n)] = make_field(p, n)
    return _FIELDS[(p, n)]


def binomial_set(p, n, kind):
    f = parse_function(field(p, n), "hk")
    spec, _ = analyze(f)
    return build_dset(level_sets(f, spec.epsilon), kind, "hk")


def polar_set(p, n, kind):
    ds, dsp = affine_polar_baseline(field(p, n))
    return ds if kind is Kind.D_S else dsp


# ---------------------------------------------------------------------------

def check_1():
    want = [
        (5, 4, Kind.D_S, (625, 260, 105, 110)),
        (5, 4, Kind.D_Sprime, (625, 364, 213, 210)),
        (7, 4, Kind.D_S, (2401, 1050, 455, 462)),
        (7, 4, Kind.D_Sprime, (2401, 1350, 761, 756)),
        (3, 8, Kind.D_S, (6561, 2214, 729, 756)),
    ]
    bad = []
    for p, n, kind, params in want:
        got = counted_params(binomial_set(p, n, kind)).astuple()
        if got != params:
            bad.append(f"GF({p}^{n}) {kind.value}: {got} != {params}")
    return not bad, "; ".join(bad) or f"{len(want)} parameter sets counted exactly"


def check_2():
    want = [
        (polar_set, 5, 4, Kind.D_S, 86), (binomial_set, 5, 4, Kind.D_S, 104),
        (polar_set, 7, 4, Kind.D_S, 237), (binomial_set, 7, 4, Kind.D_S, 335),
        (polar_set, 5, 4, Kind.D_Sprime, 625), (binomial_set, 5, 4, Kind.D_Sprime, 625),
        (polar_set, 7, 4, Kind.D_Sprime, 2401), (binomial_set, 7, 4, Kind.D_Sprime, 2401),
        (binomial_set, 3, 8, Kind.D_S, 566),
    ]
    got, bad = [], []
    for build, p, n, kind, expected in want:
        r = rank(from_graph(cayley_graph(build(p, n, kind)), p))
        got.append(r)
        if r != expected:
            bad.append(f"{build.__name__} GF({p}^{n}) {kind.value}: rank {r} != {expected}")
    return not bad, "; ".join(bad) or f"ranks {got}"


CATALOG = (
    [(3, n, "quadratic") for n in range(2, 9)]
    + [(5, n, "quadratic") for n in (2, 3, 4)]
    + [(7, n, "quadratic") for n in (2, 3, 4)]
    + [(3, 2, "quadratic:a=10"), (5, 2, "quadratic:a=2"), (3, 4, "quadratic:a=10")]
    + [(p, 4, "hk") for p in (3, 5, 7)] + [(3, 8, "hk"), (3, 6, "sporadic3_6")]
)


def check_3():
    bad, inverted = [], 0
    for p, n, fn in CATALOG:
        f = parse_function(field(p, n), fn)
        spec = walsh_transform(f)
        q = p**n
        if not spec.is_bent:
            bad.append(f"{fn} GF({p}^{n}) not bent")
        if parseval_sum(spec) != q * q:
            bad.append(f"{fn} GF({p}^{n}) Parseval")
        if q <= 729:
            inverted += 1
            if not np.array_equal(walsh_inverse(spec), f.values):
                bad.append(f"{fn} GF({p}^{n}) inversion")
    return not bad, "; ".join(bad) or (f"{len(CATALOG)} functions bent with exact Parseval, "
                                       f"{inverted} inverted exactly")


def check_4():
    bad, total = [], 0
    for p in (3, 5, 7):
        rep = hk_dual_check(parse_function(field(p, 4), "hk"))
        total += rep.checked
        if not rep.ok:
            bad.append(f"p={p}: {len(rep.exceptions)} exceptions, first {rep.exceptions[:3]}")
    return not bad, "; ".join(bad) or f"{total} Walsh values matched, zero exceptions"


def check_5():
    f = parse_function(field(3, 6), "sporadic3_6")
    spec, rep = analyze(f)
    lv = level_sets(f)
    witnesses = []
    for kind in Kind:
        try:
            verify_pds_counting(build_dset(lv, kind))
        except NotAPDS as exc:
            witnesses.append(f"{kind.value}: {exc}")
    ok = spec.is_bent and spec.regularity == NON_WEAKLY_REGULAR and not rep.satisfied and bool(witnesses)
    return ok, (f"bent={spec.is_bent}, {spec.regularity}, {len(witnesses)}/4 sets fail; "
                + (witnesses[0] if witnesses else "no witness"))


def check_6():
    bad = []
    primes = [p for p in range(3, 102) if all(p % d for d in range(2, p))]
    for p in primes:
        rep = prime_group_identities(p)
        if not rep.ok:
            bad.append(f"p={p}: {[k for k, v in rep.checks.items() if not v]}")
    for p in (3, 5):
        f = parse_function(field(p, 2), "quadratic")
        spec, _ = analyze(f)
        rep = check_level_products(level_sets(f, spec.epsilon), spec.mu, 2)
        if not rep.ok:
            bad.append(f"products GF({p}^2): {[k for k, v in rep.checks.items() if not v]}")
    eq_checked = 0
    for p, n, fn in [(3, 2, "quadratic"), (3, 2, "quadratic:a=10"), (5, 2, "quadratic"),
                     (7, 2, "quadratic"), (3, 4, "quadratic"), (3, 4, "hk"),
                     (5, 4, "quadratic"), (5, 4, "hk")]:
        f = parse_function(field(p, n), fn)
        spec, _ = analyze(f)
        lv = level_sets(f, spec.epsilon)
        for kind in Kind:
            par = predict_params(kind, p, n // 2, spec.epsilon)
            eq_checked += 1
            if not verify_pds_equation(f.ctx, build_dset(lv, kind).members, *par.astuple()):
                bad.append(f"group-ring equation {fn} GF({p}^{n}) {kind.value}")
    return not bad, "; ".join(bad) or (f"{len(primes)} primes, products at GF(3^2) and GF(5^2), "
                                       f"{eq_checked} sets satisfy the group-ring equation")


def check_7():
    bad, done = [], []
    for p, n, fn in [(3, 2, "quadratic"), (3, 2, "quadratic:a=10"), (5, 2, "quadratic"),
                     (3, 4, "hk"), (3, 4, "quadratic"), (5, 4, "hk"), (5, 4, "quadratic")]:
        rel = build_relations(parse_function(field(p, n), fn))
        verify_scheme(rel)
        amo = verify_amorphic(rel)
        want = "negative-Latin" if rel.epsilon == -1 else "Latin"
        if not amo.amorphic or want not in tag_set(amo.tag or "neither"):
            bad.append(f"{fn} GF({p}^{n}): amorphic={amo.amorphic}, tag={amo.tag}")
        done.append(f"{fn}@{p**n}:{amo.tag}")
    return not bad, "; ".join(bad) or ", ".join(done)


def _random_l2(F, rng):
    while True:
        coeffs = [int(c) for c in rng.integers(0, F.q, F.n)]
        if np.unique(linearized_map(F, coeffs)).size == F.q:
            return coeffs


def check_8():
    rng = np.random.default_rng(20240229)
    bad, count = [], 0
    for p, n, fn in [(3, 4, "hk"), (5, 2, "quadratic")]:
        F = field(p, n)
        base = parse_function(F, fn)
        for _ in range(5):
            c = int(rng.integers(1, p))
            g = compose_linearized(base, c, _random_l2(F, rng))
            spec, rep = analyze(g)
            count += 1
            if not rep.satisfied:
                bad.append(f"{g.name}: Condition A fails")
                continue
            lv = level_sets(g, spec.epsilon)
            for kind in Kind:
                pred = predict_params(kind, p, n // 2, spec.epsilon)
                got = counted_params(build_dset(lv, kind))
                if not pred.agrees_with(got):
                    bad.append(f"{g.name} {kind.value}: {pred.astuple()} vs {got.astuple()}")
    return not bad, "; ".join(bad) or f"{count} compositions keep Condition A and parameters"


def check_9():
    with tempfile.TemporaryDirectory() as tmp:
        rows = reproduce_tables(allow_slow=False, with_rank=False, graph_dir=Path(tmp))
        files = sorted(Path(tmp).glob("*.g6"))
        sizes = {from_graph6(f.read_bytes()).v for f in files}
    aut_external = all(r["aut"] == "external" for r in rows)
    ok = aut_external and len(files) == 8 and sizes == {625, 2401}
    return ok, (f"|Aut(G)| not computed (reported as 'external' in all {len(rows)} rows); "
                f"{len(files)} graph6 exports written for external automorphism tools")


CRITERIA = [
    (1, "parameter reproduction", check_1),
    (2, "rank reproduction", check_2),
    (3, "Walsh exactness", check_3),
    (4, "binomial dual", check_4),
    (5, "negative control", check_5),
    (6, "exact identities", check_6),
    (7, "3-class amorphic scheme", check_7),
    (8, "closure under linear maps", check_8),
    (9, "automorphism groups out of scope", check_9),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, record_criterion):
    ok, detail = check()
    record_criterion(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    sys.exit(1 if failed else 0)
