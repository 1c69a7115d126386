import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from bentsrg.bent import (NON_WEAKLY_REGULAR, NOT_BENT, REGULAR, WEAKLY_REGULAR, PFunc, analyze,
                          catalog_hk, catalog_quadratic, catalog_sporadic_ternary, classify_regularity,
                          compose_linearized, condition_a, hk_dual_check, hk_exponent,
                          homogeneity_exponents, linearized_map, parse_function, parseval_sum,
                          walsh_inverse, walsh_transform)
from bentsrg.cyclotomic import CycInt, root_power
from bentsrg.field import make_field


def complex_walsh(f):
    """Floating-point Walsh spectrum straight from the definition."""
    F = f.ctx
    ids = np.arange(F.q)
    zeta = np.exp(2j * np.pi / F.p)
    out = np.empty(F.q, dtype=complex)
    for b in range(F.q):
        out[b] = np.sum(zeta ** ((f.values + F.abs_trace(F.mul(b, ids))) % F.p))
    return out


def as_complex(z: CycInt) -> complex:
    zeta = np.exp(2j * np.pi / z.p)
    return sum(c * zeta**i for i, c in enumerate(z.coeffs))


@pytest.mark.parametrize("p,n,fn", [(3, 2, "quadratic"), (5, 2, "quadratic"), (3, 3, "quadratic"),
                                    (3, 4, "hk"), (3, 4, "tracepoly:1,4")])
def test_walsh_matches_complex_definition(p, n, fn):
    f = parse_function(make_field(p, n), fn)
    spec = walsh_transform(f)
    ref = complex_walsh(f)
    got = np.array([as_complex(spec[b]) for b in range(f.ctx.q)])
    assert np.allclose(got, ref, atol=1e-6)
    assert spec.is_bent == bool(np.allclose(np.abs(ref) ** 2, f.ctx.q))


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [2, 4])
def test_quadratic_sign_by_davenport_hasse(p, n):
    # sum_x zeta^(tr(x^2)) = (-1)^(n-1) g^n with g^2 = p* = (-1)^((p-1)/2) p
    pstar = p if p % 4 == 1 else -p
    f = catalog_quadratic(make_field(p, n))
    spec, rep = analyze(f)
    assert spec[0] == CycInt.integer(p, -(pstar ** (n // 2)))
    assert rep.satisfied and rep.homogeneous_l == 2 % (p - 1)
    assert spec.epsilon == (-1 if -(pstar ** (n // 2)) < 0 else 1)


def test_regularity_labels():
    assert analyze(catalog_quadratic(make_field(3, 2)))[0].regularity == REGULAR
    spec, rep = analyze(catalog_hk(make_field(3, 4)))
    assert spec.regularity == WEAKLY_REGULAR and spec.epsilon == -1 and spec.weakly_regular
    assert rep.satisfied
    spec, rep = analyze(catalog_sporadic_ternary(make_field(3, 6)))
    assert spec.is_bent and spec.regularity == NON_WEAKLY_REGULAR and not rep.satisfied
    zero = parse_function(make_field(3, 4), "tracepoly:")
    spec, rep = analyze(zero)
    assert not spec.is_bent and spec.regularity == NOT_BENT and not rep.satisfied


def test_mu_and_epsilon_relation():
    for p in (3, 5, 7):
        spec, _ = analyze(catalog_hk(make_field(p, 4)))
        k = 2
        assert spec.mu == spec.epsilon * (-1) ** ((p - 1) * k // 2)


def test_dual_is_reconstructed():
    f = catalog_hk(make_field(3, 4))
    spec = classify_regularity(walsh_transform(f))
    pk = 9
    for b in range(81):
        assert spec[b] == root_power(3, int(spec.dual[b])) * (spec.epsilon * pk)


def test_odd_degree_classification_rejected():
    spec = walsh_transform(catalog_quadratic(make_field(3, 3)))
    assert spec.is_bent
    with pytest.raises(ValueError):
        classify_regularity(spec)


@pytest.mark.parametrize("p,n,fn", [(3, 2, "quadratic"), (3, 4, "hk"), (5, 2, "quadratic:a=2"),
                                    (3, 6, "sporadic3_6"), (3, 4, "tracepoly:1,4")])
def test_parseval_and_inversion(p, n, fn):
    f = parse_function(make_field(p, n), fn)
    spec = walsh_transform(f)
    assert parseval_sum(spec) == f.ctx.q**2
    assert np.array_equal(walsh_inverse(spec), f.values)


def test_inversion_cap():
    with pytest.raises(ValueError):
        walsh_inverse(walsh_transform(catalog_quadratic(make_field(7, 4))))


def test_hk_homogeneity_and_exponent():
    assert hk_exponent(3, 1) == 27 + 9 - 3 + 1
    f = catalog_hk(make_field(5, 4))
    assert homogeneity_exponents(f) == [2]
    with pytest.raises(ValueError):
        catalog_hk(make_field(3, 2))


@pytest.mark.parametrize("p", [3, 5])
def test_hk_dual_check(p):
    rep = hk_dual_check(catalog_hk(make_field(p, 4)))
    assert rep.ok and rep.checked == p**4


def test_sporadic_needs_pinned_field():
    with pytest.raises(ValueError):
        catalog_sporadic_ternary(make_field(3, 4))
    with pytest.raises(ValueError):
        catalog_sporadic_ternary(make_field(3, 6, modulus=(1, 2, 0, 0, 0, 0, 1)))


def test_parse_function_errors():
    F = make_field(3, 4)
    for bad in ("bogus", "quadratic:b=1", "quadratic:a=3", "hk:1", "tracepoly:1"):
        with pytest.raises(ValueError):
            parse_function(F, bad)
    assert parse_function(F, "quadratic:a=2").name == "quadratic:a=2"


def test_linearized_map_is_additive():
    F = make_field(3, 4)
    L = linearized_map(F, [1, 2, 0, 1])
    ids = np.arange(F.q)
    for a in (5, 17, 40):
        assert np.array_equal(L[F.add(ids, a)], F.add(L, L[a]))


def test_compose_rejects_non_permutations():
    f = catalog_quadratic(make_field(3, 2))
    with pytest.raises(ValueError):
        compose_linearized(f, 0, [1])
    with pytest.raises(ValueError):
        compose_linearized(f, 1, [1, 1])  # x + x^3 vanishes on the roots of x^2 + 1


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2), st.lists(st.integers(0, 8), min_size=2, max_size=2))
def test_composition_preserves_condition_a(c, l2):
    F = make_field(3, 2)
    table = linearized_map(F, l2)
    assume(np.unique(table).size == F.q)
    g = compose_linearized(catalog_quadratic(F), c, l2)
    _, rep = analyze(g)
    assert rep.satisfied


def test_values_are_validated():
    F = make_field(3, 2)
    with pytest.raises(ValueError):
        PFunc(F, np.full(9, 3))
    with pytest.raises(ValueError):
        PFunc(F, np.zeros(8))


def test_condition_a_flags_odd_function():
    F = make_field(5, 2)
    f = parse_function(F, "tracepoly:1,3")
    rep = condition_a(f)
    assert not rep.even and not rep.satisfied
