import random
from fractions import Fraction as F

import pytest

from cyclochern.algebra import AlgMatrix, is_idempotent
from cyclochern.derham import (CIRCLE, CIRCLE_NORMALIZED, SPHERE, DegreeMismatch, KahlerForm,
                               NonPolynomial, PairingFunctional, SideIdentityFailure,
                               ch_cw_even, ch_cw_odd, circle_residue, compare_cq_cw, d_poly,
                               grassmann_curvature, matrix_wedge, mu_chain, mu_map, pair,
                               sphere_integrate, sphere_moment)
from cyclochern.forms import B_fast, GradedChain, NormalizationMismatch, b_fast
from cyclochern.presented import laurent, polynomial_ring, sphere
from cyclochern.scalars import GaussQ
from oracles import bott_curvature_trace_sympy, residue_sympy, sphere_moment_quadrature

S = sphere()
L = laurent()


def bott():
    return AlgMatrix.from_rows(S, [[S.parse("1/2 + z/2"), S.parse("(x - i*y)/2")],
                                   [S.parse("(x + i*y)/2"), S.parse("1/2 - z/2")]])


def form(P, deg, terms, power=0):
    return KahlerForm(P, deg, {tuple(k): P.parse(v) for k, v in terms.items()}, power).pruned()


# -- forms ----------------------------------------------------------------------

def test_wedge_antisymmetry_and_d_squared():
    P = polynomial_ring(["x", "y", "z"])
    dx, dy = d_poly(P.gen("x"), P), d_poly(P.gen("y"), P)
    assert (dx.wedge(dy) + dy.wedge(dx)).is_zero()
    assert dx.wedge(dx).is_zero()
    f = P.parse("x^2*y + 3*z*y^3 - x*z")
    assert d_poly(f, P).d().is_zero()
    w = form(P, 1, {(0,): "y*z", (2,): "x^3"})
    assert w.d().d().is_zero()


def test_laurent_inverse_differential():
    w = d_poly(L.parse("u^-1"), L)
    assert w.terms == {(0,): L.parse("-u^-2")}


# -- comparison map --------------------------------------------------------------

def test_mu_examples():
    P = polynomial_ring(["x", "y"])
    x, y = P.parse("x").popitem()[0], P.parse("y").popitem()[0]
    assert mu_chain({(x,): 3}, P).terms == {(): {x: 3}}
    assert mu_chain({(x, y): 1}, P).terms == {(1,): {x: 1}}
    # x dy dx -> -(1/2) x dx^dy
    assert mu_chain({(x, y, x): 1}, P).terms == {(0, 1): {x: F(-1, 2)}}


def _sample_chains(P, mons, n, count, rng):
    for _ in range(count):
        yield (rng.choice(mons),) + tuple(rng.choice([m for m in mons if any(m)])
                                          for _ in range(n))


@pytest.mark.parametrize("P,exact", [(polynomial_ring(["x", "y", "z"]), True),
                                     (laurent(), True), (sphere(), False)],
                         ids=["poly", "laurent", "sphere"])
def test_mu_intertwines_differentials(P, exact):
    rng = random.Random(7)
    k = P.ngens
    raw = [tuple(rng.randint(0, 2) for _ in range(k)) for _ in range(12)] + [P.unit_key]
    mons = sorted({m for m in raw if P.normal_form({m: 1}) == {m: 1}})
    for n in range(3):
        for t in _sample_chains(P, mons, n, 25, rng):
            lhs = mu_chain(B_fast(t, P), P)
            if not lhs.terms:
                lhs = KahlerForm.zero(P, n + 1)
            diff = lhs - mu_chain({t: 1}, P).d()
            assert (diff.is_zero() if exact else diff.vanishes()), t
            if n:
                bb = b_fast(t, P)
                if bb:
                    w = mu_chain(bb, P)
                    assert (w.is_zero() if exact else w.vanishes()), t


def test_mu_map_preserves_powers():
    P = polynomial_ring(["x"])
    c = GradedChain({1: {((0,), (1,)): 2}}, {1: -1})
    assert mu_map(c, P)[1].twopi_power == -1


# -- curvature and characters ----------------------------------------------------------

def test_bott_is_idempotent_with_trace_one():
    e = bott()
    assert is_idempotent(e)
    assert ch_cw_even(e, 1)[0].terms == {(): S.one()}
    assert ch_cw_even(e, 1)[2].twopi_power == -1


def test_constant_curvature_vanishes():
    e = AlgMatrix.scalar_matrix(S, [[1, 0], [0, 0]])
    R = grassmann_curvature(e)
    assert all(x.is_zero() for row in R.matrix for x in row)
    assert set(ch_cw_even(e, 2)) == {0, 2, 4} and ch_cw_even(e, 2)[2].is_zero()


def test_bott_curvature_matches_symbolic_oracle():
    R = grassmann_curvature(bott())
    tr = R.trace()
    for p in [(F(3, 13), F(4, 13), F(12, 13)), (F(2, 3), F(1, 3), F(2, 3)), (0, 0, 1)]:
        ref = bott_curvature_trace_sympy(p)
        for (i, j), val in ref.items():
            coeff = tr.terms.get((i, j), {})
            got = GaussQ(0, 0)
            for m, c in coeff.items():
                term = c
                for v, e in zip(p, m):
                    term = term * F(v) ** e
                got = got + term
            re_, im_ = val.as_real_imag()
            assert got == GaussQ(F(str(re_)), F(str(im_)))


def test_curvature_powers_and_side_identity():
    e = bott()
    R = grassmann_curvature(e).matrix
    E = [[KahlerForm.function(S, x) for x in row] for row in e.entries]
    ER, RE = matrix_wedge(E, R), matrix_wedge(R, E)
    for i in range(2):
        for j in range(2):
            assert ER[i][j].equivalent(RE[i][j])


def test_block_sum_curvature():
    e = bott()
    f = AlgMatrix.scalar_matrix(S, [[1]])
    R = grassmann_curvature(e.block_sum(f)).matrix
    assert all(R[i][2].is_zero() and R[2][i].is_zero() for i in range(3))


def test_side_identity_failure_is_raised(monkeypatch):
    import cyclochern.derham as D
    real = D.matrix_wedge
    calls = {"n": 0}

    def corrupt(M, N):
        out = real(M, N)
        calls["n"] += 1
        if calls["n"] == 3:         # the (de)^2 e product
            out[0][0] = out[0][0] + form(S, 2, {(0, 1): "1"})
        return out

    monkeypatch.setattr(D, "matrix_wedge", corrupt)
    with pytest.raises(SideIdentityFailure):
        D.grassmann_curvature(bott())


def test_odd_character_examples():
    g1 = AlgMatrix.from_rows(L, [[L.parse("u")]])
    c = ch_cw_odd(g1, 1)
    assert c[1].terms == {(0,): L.parse("u^-1")} and c[1].twopi_power == 0
    g2 = AlgMatrix.from_rows(L, [[L.parse("u^2")]])
    assert ch_cw_odd(g2, 0)[1].terms == {(0,): L.parse("2*u^-1")}
    one = AlgMatrix.from_rows(L, [[L.one()]])
    assert all(w.is_zero() for w in ch_cw_odd(one, 1).values())


# -- currents -------------------------------------------------------------------------

@pytest.mark.parametrize("abc", [(0, 0, 0), (2, 0, 0), (2, 2, 0), (4, 2, 2), (0, 0, 6), (1, 2, 0)])
def test_sphere_moments_against_quadrature(abc):
    assert abs(float(sphere_moment(*abc)) - sphere_moment_quadrature(*abc)) < 1e-12


def test_sphere_integral_examples():
    assert sphere_integrate(form(S, 2, {(0, 1): "1"})) == (0, 1)
    assert sphere_integrate(form(S, 2, {(0, 1): "z"}))[0] == GaussQ(0, F(-2, 3))
    assert sphere_integrate(form(S, 2, {(0, 1): "x*y"}))[0] == 0
    # z dx^dy + x dy^dz + y dz^dx integrates 1 over the sphere: 4 pi = -2i (2 pi i)
    w = form(S, 2, {(0, 1): "z", (1, 2): "x", (0, 2): "-y"})
    assert sphere_integrate(w) == (GaussQ(0, -2), 1)


def test_sphere_integrate_rejects_non_polynomial_and_degree():
    with pytest.raises(DegreeMismatch):
        sphere_integrate(form(S, 1, {(0,): "1"}))
    from cyclochern.presented import PresentedAlgebra
    Q = PresentedAlgebra.build(["x", "y", "z"], inverses={"x": "xi"})
    with pytest.raises(NonPolynomial):
        sphere_integrate(form(Q, 2, {(1, 2): "x^-1"}))


def test_circle_residue_examples():
    assert circle_residue(form(L, 1, {(0,): "u^-1"})) == (1, 1)
    assert circle_residue(form(L, 1, {(0,): "1"})) == (0, 1)
    assert circle_residue(form(L, 1, {(0,): "u^-3*u^2"})) == (1, 1)


@pytest.mark.parametrize("expr", ["u^-1 + 3*u^2", "5*u^-1 - u^-4", "2 + u^-2", "7*u^-1"])
def test_residue_matches_sympy(expr):
    got, _ = circle_residue(form(L, 1, {(0,): expr}))
    assert got == int(residue_sympy(expr.replace("^", "**")))


def test_currents_vanish_on_exact_forms():
    rng = random.Random(1)
    for _ in range(10):
        eta = KahlerForm(S, 1, {(i,): {(rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 1)):
                                       rng.randint(-3, 3)} for i in range(3)}).pruned()
        assert sphere_integrate(eta.d())[0] == 0
        f = {(rng.randint(0, 4), rng.randint(0, 4)): rng.randint(-3, 3)}
        assert circle_residue(d_poly(f, L))[0] == 0


def test_sphere_integration_kills_relation_ideal():
    # (x^2 + y^2 + z^2 - 1) * w is zero as a form on the sphere
    w = form(S, 2, {(0, 1): "x^2 + y^2 + z^2 - 1"})
    assert w.is_zero()


def test_pairing_rules():
    e = AlgMatrix.scalar_matrix(S, [[1, 0], [0, 0]])
    assert pair(ch_cw_even(e, 1), SPHERE) == 0
    g = AlgMatrix.from_rows(L, [[L.parse("u")]])
    assert pair(ch_cw_odd(g, 0), CIRCLE_NORMALIZED) == 1
    with pytest.raises(NormalizationMismatch):
        pair(ch_cw_odd(g, 0), CIRCLE)
    assert pair(ch_cw_even(bott(), 1), SPHERE) in (1, -1)
    with pytest.raises(NormalizationMismatch):
        pair(ch_cw_even(bott(), 1), PairingFunctional("sphere-integration", 0))
    with pytest.raises(DegreeMismatch):
        pair(ch_cw_odd(g, 0), SPHERE)


def test_orientation_flips_sign():
    flipped = PairingFunctional("sphere-integration", 1, -1)
    assert pair(ch_cw_even(bott(), 1), flipped) == -pair(ch_cw_even(bott(), 1), SPHERE)


def test_compare_routes_bott_and_constant():
    rep = compare_cq_cw(bott(), SPHERE)
    assert rep.ok and rep.cw_value in (1, -1)
    const = AlgMatrix.scalar_matrix(S, [[1, 0], [0, 0]])
    rep = compare_cq_cw(const, SPHERE)
    assert rep.ok and rep.cq_value == 0


def test_compare_routes_circle_generator():
    g = AlgMatrix.from_rows(L, [[L.parse("u")]])
    rep = compare_cq_cw(g, CIRCLE_NORMALIZED, tau_cq=CIRCLE, N=0)
    assert rep.ok and rep.cw_value == 1
    with pytest.raises(NormalizationMismatch):
        compare_cq_cw(g, CIRCLE_NORMALIZED, N=0)
