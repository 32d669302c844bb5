import pytest

from cyclochern.algebra import complex_numbers, direct_power, matrix_units, truncated_polynomial
from cyclochern.forms import (B_fast, B_form, CapOverflow, GradedChain, NormalizationMismatch,
                              apply_B, apply_b, apply_d, apply_kappa, b_fast, b_form, d_form,
                              kappa_form, omega_basis, omega_dim, verify_mixed_identities)
from cyclochern.morita import cyclic_group, group_algebra
from cyclochern.sparse import axpy, clean

SMALL = [direct_power(3), matrix_units(2), truncated_polynomial(2), truncated_polynomial(3),
         group_algebra(cyclic_group(3))]


def _idx(A, label):
    return A.labels.index(label)


@pytest.mark.parametrize("A", SMALL + [complex_numbers()])
def test_basis_size_formula(A):
    for n in range(5):
        assert len(omega_basis(A, n)) == A.dim * (A.dim - 1) ** n == omega_dim(A, n)


def test_basis_examples():
    assert omega_basis(complex_numbers(), 1) == []
    assert len(omega_basis(matrix_units(2), 1)) == 12
    assert len(omega_basis(truncated_polynomial(2), 7)) == 2


@pytest.mark.parametrize("A", SMALL)
def test_literal_and_closed_form_routes_agree(A):
    for n in range(4):
        for t in omega_basis(A, n):
            assert clean(b_form({t: 1}, A)) == clean(b_fast(t, A)), t
            assert clean(B_form({t: 1}, A)) == clean(B_fast(t, A)), t


def test_b_vanishes_in_degree_zero():
    A = matrix_units(2)
    c = GradedChain({0: {(k,): 1 for k in range(4)}}, {0: 0})
    assert apply_b(c, A).is_zero()


def test_b_commutator_matrix_units():
    A = matrix_units(2)
    E12, E21, E22 = _idx(A, "E12"), _idx(A, "E21"), _idx(A, "E22")
    # E12 E21 - E21 E12 = E11 - E22 = 1 - 2 E22
    assert clean(b_fast((E12, E21), A)) == {(0,): 1, (E22,): -2}


def test_b_commutative_degree_one_vanishes():
    A = truncated_polynomial(3)
    for t in omega_basis(A, 1):
        assert not clean(b_fast(t, A))


def test_kappa_identity_on_degree_zero():
    A = matrix_units(2)
    for t in omega_basis(A, 0):
        assert kappa_form({t: 1}, A) == {t: 1}


def test_kappa_equals_one_minus_bd_plus_db():
    # standard relation 1 - kappa = b d + d b, checked on every basis form
    for A in SMALL:
        for n in range(4):
            for t in omega_basis(A, n):
                v = {t: 1}
                lhs = {t: 1}
                axpy(lhs, -1, kappa_form(v, A))
                rhs = b_form(d_form(v, A), A)
                if n > 0:
                    axpy(rhs, 1, d_form(b_form(v, A), A))
                assert clean(lhs) == clean(rhs), (A, t)


def test_kappa_power_fixes_exact_forms():
    # kappa^(n+1) d = d on Omega^n
    A = truncated_polynomial(3)
    for n in range(3):
        for t in omega_basis(A, n):
            w = d_form({t: 1}, A)
            x = dict(w)
            for _ in range(n + 1):
                x = kappa_form(x, A)
            assert clean(x) == clean(w)


def test_B_examples():
    A = truncated_polynomial(2)
    x = _idx(A, "x")
    assert clean(B_fast((x,), A)) == {(0, x): 1}           # B(a) = da
    assert not clean(B_fast((0,), A))                        # B(1) = 0
    # B(x dx) = dx dx + kappa(dx dx) = dx dx - dx dx = 0
    assert not clean(B_fast((x, x), A))
    assert not clean(B_fast((0, x), A))


def test_d_squared_zero():
    for A in SMALL:
        for n in range(3):
            for t in omega_basis(A, n):
                assert not clean(d_form(d_form({t: 1}, A), A))


@pytest.mark.parametrize("A", SMALL + [complex_numbers()])
def test_mixed_identities(A):
    rep = verify_mixed_identities(A, 4, sources=True)
    assert rep.ok
    assert set(rep.B_squared) == set(range(5))


def test_mixed_identities_detect_a_broken_operator(monkeypatch):
    import cyclochern.forms as F
    A = matrix_units(2)

    def b_wrong_sign(t, A):
        return {k: -c if len(t) == 3 else c for k, c in F.b_fast(t, A).items()}

    monkeypatch.setitem(F._FAST, "b", b_wrong_sign)
    A._cache.clear()
    assert not verify_mixed_identities(A, 3).ok
    A._cache.clear()


def test_graded_chain_arithmetic_and_power_mismatch():
    A = truncated_polynomial(2)
    c1 = GradedChain({0: {(0,): 1}}, {0: 0})
    c2 = GradedChain({0: {(0,): 2}}, {0: -1})
    with pytest.raises(NormalizationMismatch):
        c1 + c2
    assert (c1 + c1).component(0) == {(0,): 2}
    assert (c1 - c1).is_zero()


def test_cap_overflow_flagged():
    A = truncated_polynomial(2)
    x = _idx(A, "x")
    c = GradedChain({2: {(x, x, x): 1}}, {2: 0})
    with pytest.raises(CapOverflow):
        apply_B(c, A, cap=2)
    assert apply_B(c, A, cap=2, allow_truncation=True).is_zero()
    with pytest.raises(CapOverflow):
        apply_d(c, A, cap=2)


def test_operators_are_linear():
    A = matrix_units(2)
    basis = omega_basis(A, 2)
    u = {basis[3]: 2, basis[7]: -1}
    v = {basis[5]: 3}
    for op in (b_form, B_form, kappa_form, d_form):
        w = dict(u)
        axpy(w, 5, v)
        expect = op(u, A)
        axpy(expect, 5, op(v, A))
        assert clean(op(w, A)) == clean(expect)
