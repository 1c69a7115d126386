import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF as SymGF, Poly, symbols
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from bentsrg.field import (FieldError, FieldElem, format_element, is_irreducible, load_constants,
                           make_field, multiplicative_order, parse_element, quad_classes)

SMALL = [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4), (5, 3)]


def _hi_first(ctx, x):
    return [int(c) for c in reversed(ctx.coeffs(x))]


def _sym_mul(ctx, a, b):
    """Reference product via sympy's dense GF(p)[x] arithmetic."""
    mod = [int(c) for c in reversed(ctx.modulus)]
    r = gf_rem(gf_mul(_hi_first(ctx, a), _hi_first(ctx, b), ctx.p, ZZ), mod, ctx.p, ZZ)
    r = [int(c) % ctx.p for c in r]
    return sum(c * ctx.p**i for i, c in enumerate(reversed(r)))


def test_pinned_moduli_match_sympy_irreducibility():
    for (p, n), (modulus, gen) in load_constants().items():
        assert gf_irreducible_p([int(c) for c in reversed(modulus)], p, ZZ)
        assert gen == tuple([0, 1] + [0] * (n - 2))


@pytest.mark.parametrize("p,n", [(3, 2), (3, 4), (5, 2), (7, 2)])
def test_generator_order_by_repeated_multiplication(p, n):
    F = make_field(p, n)
    assert multiplicative_order(F, F.generator) == F.q - 1


@pytest.mark.parametrize("p,n", SMALL)
def test_multiplication_table_matches_sympy(p, n):
    F = make_field(p, n)
    rng = np.random.default_rng(p * 10 + n)
    a = rng.integers(0, F.q, 300)
    b = rng.integers(0, F.q, 300)
    ours = F.mul(a, b)
    for x, y, z in zip(a, b, ours):
        assert z == _sym_mul(F, int(x), int(y))


@pytest.mark.parametrize("p,n", SMALL)
def test_trace_is_sum_of_conjugates(p, n):
    F = make_field(p, n)
    mod = [int(c) for c in reversed(F.modulus)]
    for x in range(0, F.q, max(1, F.q // 60)):
        acc = []
        for i in range(n):
            acc = _add_hi(acc, gf_pow_mod(_hi_first(F, x), p**i, mod, p, ZZ), p)
        acc = [c for c in acc if c] or [0]
        assert len(acc) == 1 and acc[0] == F.abs_trace(x)


def _add_hi(a, b, p):
    m = max(len(a), len(b))
    a = [0] * (m - len(a)) + list(a)
    b = [0] * (m - len(b)) + list(b)
    out = [(x + y) % p for x, y in zip(a, b)]
    while out and out[0] == 0:
        out.pop(0)
    return out


@pytest.mark.parametrize("p,n", SMALL)
def test_trace_form_gram_matrix(p, n):
    F = make_field(p, n)
    ids = np.arange(F.q)
    for b in (1, 2, F.q - 1):
        direct = F.abs_trace(F.mul(b, ids))
        via_gram = (F.digits[b] @ F.trace_form @ F.digits.T) % p
        assert np.array_equal(direct, via_gram)


def test_relative_trace_lands_in_subfield_and_is_linear():
    F = make_field(3, 4)
    sub = set(F.subfield(2).tolist())
    assert len(sub) == 9
    ids = np.arange(F.q)
    t = F.rel_trace(ids, 2)
    assert set(np.unique(t).tolist()) <= sub
    # tr_{4/1} = tr_{2/1} o tr_{4/2}
    assert np.array_equal(F.sub_trace(t, 2), F.abs_trace(ids))
    with pytest.raises(FieldError):
        F.sub_trace(F.generator, 2)


def test_quad_classes_against_euler():
    for p in (3, 5, 7, 11, 13, 101):
        qc = quad_classes(p)
        assert len(qc.squares) == len(qc.nonsquares) == (p - 1) // 2
        assert all(pow(s, (p - 1) // 2, p) == 1 for s in qc.squares)
    assert quad_classes(5).squares == (1, 4)
    assert quad_classes(3).nonsquares == (2,)


def test_invalid_fields_rejected():
    with pytest.raises(FieldError):
        make_field(4, 2)
    with pytest.raises(FieldError):
        make_field(2, 3)
    with pytest.raises(FieldError):
        make_field(3, 4, modulus=(0, 0, 0, 0, 1))  # x^4
    with pytest.raises(FieldError):
        make_field(3, 2, modulus=(1, 0, 2))  # not monic
    with pytest.raises(ZeroDivisionError):
        make_field(3, 2).inv(0)


def test_custom_modulus_builds_isomorphic_field():
    F = make_field(3, 2, modulus=(1, 0, 1))  # x^2 + 1, x has order 4
    assert multiplicative_order(F, F.generator) == 8
    assert sorted(F.abs_trace(np.arange(9)).tolist()).count(0) == 3


def test_constants_override(tmp_path, monkeypatch):
    bad = tmp_path / "c.txt"
    bad.write_text("3 2 0,0,1 0,1\n")
    with pytest.raises(FieldError):
        load_constants(str(bad))
    good = tmp_path / "g.txt"
    good.write_text("# comment\n3 2 2,2,1 0,1\n")
    assert load_constants(str(good)) == {(3, 2): ((2, 2, 1), (0, 1))}


def test_element_round_trip_and_operators():
    F = make_field(5, 2)
    x = F.element("13")
    assert format_element(F, x.id) == "13"
    assert parse_element(F, "13") == 8
    assert (x * x.inv()).id == 1
    assert (x - x).id == 0
    assert (x ** (F.q - 1)).id == 1
    with pytest.raises(FieldError):
        parse_element(F, "5")
    with pytest.raises(FieldError):
        x + make_field(7, 2).element(1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_field_axioms_gf81(a, b, c):
    F = make_field(3, 4)
    A, B, C = (FieldElem(F, v) for v in (a, b, c))
    assert A * (B + C) == A * B + A * C
    assert (A * B) * C == A * (B * C)
    assert A + B == B + A
    assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
    if a:
        assert (A / A).id == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 624), st.integers(-50, 50))
def test_pow_matches_repeated_multiplication(a, e):
    F = make_field(5, 4)
    ref = 1
    base = a if e >= 0 else F.inv(a)
    for _ in range(abs(e)):
        ref = F.mul(ref, base)
    assert F.pow(a, e) == ref


def test_is_irreducible_matches_sympy_on_all_small_polys():
    x = symbols("x")
    for p in (3, 5):
        for n in (2, 3):
            for code in range(p**n):
                f = [(code // p**i) % p for i in range(n)] + [1]
                expected = Poly(list(reversed(f)), x, domain=SymGF(p)).is_irreducible
                assert is_irreducible(f, p) == expected
