"""Commutative differential forms over presented algebras, the comparison
map from noncommutative forms, Chern-Weil characters and exact currents.

A :class:`KahlerForm` of degree k is a sum of ``coefficient * dx_I`` with
``I`` a strictly increasing tuple of primary generator indices (the
differential of a declared inverse ``U`` of ``u`` is rewritten as
``-U^2 du``).  Coefficients are kept in normal form; the differentials are
ambient representatives.  On a smooth hypersurface a form is zero on the
underlying manifold iff its wedge with the differentials of the relations
vanishes; :meth:`KahlerForm.vanishes` applies that test.

Transcendental factors never appear as numbers: every form and every
current carries an integer power of 2*pi*i, and pairing demands that the
powers cancel exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import AlgMatrix, invert, is_idempotent
from .chern import NotIdempotent, apply_scaling_c, ch_cq_even, ch_cq_odd
from .forms import GradedChain, NormalizationMismatch
from .presented import PresentedAlgebra
from .scalars import GaussQ, simplify
from .sparse import axpy

__all__ = [
    "KahlerForm", "FormSeq", "mu_map", "mu_chain", "d_poly", "grassmann_curvature",
    "CurvatureForm", "ch_cw_even", "ch_cw_odd", "sphere_integrate", "circle_residue",
    "PairingFunctional", "pair", "compare_cq_cw", "ComparisonReport", "DegreeMismatch",
    "NonPolynomial", "sphere_moment", "SideIdentityFailure", "matrix_d", "matrix_wedge",
    "SPHERE", "CIRCLE", "CIRCLE_NORMALIZED",
]


class DegreeMismatch(ValueError):
    pass


class NonPolynomial(ValueError):
    pass


class SideIdentityFailure(AssertionError):
    """e(de)^2 != (de)^2 e; points at a rewrite or normal-form bug."""


def _merge_sign(a: tuple, b: tuple):
    """Sign and sorted union of two wedge monomials, or (0, None) on overlap."""
    if set(a) & set(b):
        return 0, None
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


@dataclass(eq=False)
class KahlerForm:
    algebra: PresentedAlgebra
    degree: int
    terms: dict = field(default_factory=dict)       # wedge tuple -> polynomial
    twopi_power: int = 0

    @classmethod
    def zero(cls, P, degree: int, twopi_power: int = 0) -> "KahlerForm":
        return cls(P, degree, {}, twopi_power)

    @classmethod
    def function(cls, P, f: dict, twopi_power: int = 0) -> "KahlerForm":
        return cls(P, 0, {(): P.normal_form(f)} if f else {}, twopi_power).pruned()

    def pruned(self) -> "KahlerForm":
        P = self.algebra
        terms = {}
        for I_, f in self.terms.items():
            f = P.normal_form(f)
            if f:
                terms[I_] = f
        return KahlerForm(P, self.degree, terms, self.twopi_power)

    def is_zero(self) -> bool:
        return not self.pruned().terms

    def _check(self, other: "KahlerForm"):
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        if self.twopi_power != other.twopi_power and not (self.is_zero() or other.is_zero()):
            raise NormalizationMismatch(
                f"2*pi*i powers {self.twopi_power} and {other.twopi_power}")

    def __add__(self, other: "KahlerForm") -> "KahlerForm":
        self._check(other)
        terms = {k: dict(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            axpy(terms.setdefault(k, {}), 1, v)
        tp = self.twopi_power if not self.is_zero() else other.twopi_power
        return KahlerForm(self.algebra, self.degree, terms, tp).pruned()

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "KahlerForm":
        return KahlerForm(self.algebra, self.degree,
                          {k: {m: simplify(c * x) for m, x in v.items()} for k, v in self.terms.items()},
                          self.twopi_power).pruned()

    def times_function(self, f: dict) -> "KahlerForm":
        P = self.algebra
        return KahlerForm(P, self.degree, {k: P.mul(f, v) for k, v in self.terms.items()},
                          self.twopi_power).pruned()

    def wedge(self, other: "KahlerForm") -> "KahlerForm":
        P = self.algebra
        terms: dict = {}
        for a, fa in self.terms.items():
            for b, fb in other.terms.items():
                s, ab = _merge_sign(a, b)
                if s:
                    axpy(terms.setdefault(ab, {}), s, P.mul(fa, fb))
        return KahlerForm(P, self.degree + other.degree, terms,
                          self.twopi_power + other.twopi_power).pruned()

    def d(self) -> "KahlerForm":
        P = self.algebra
        out = KahlerForm.zero(P, self.degree + 1, self.twopi_power)
        for I_, f in self.terms.items():
            df = d_poly(f, P)
            out = out + df.wedge(KahlerForm(P, self.degree, {I_: {P.unit_key: 1}}, self.twopi_power))
        return out

    def vanishes(self) -> bool:
        """Zero on the underlying variety (exact on smooth complete intersections)."""
        P = self.algebra
        if not P.smooth:
            return self.is_zero()
        w = self
        for lhs, rhs in P.rules:
            if P.is_inverse_rule(lhs):
                continue
            rel = {lhs: 1}
            axpy(rel, -1, rhs)
            w = w.wedge(_d_raw(rel, P))
        return w.is_zero()

    def equivalent(self, other: "KahlerForm") -> bool:
        if self.degree != other.degree:
            return False
        if self.twopi_power != other.twopi_power:
            return self.is_zero() and other.is_zero()
        return (self - other).vanishes()

    def coefficient(self, gens: str) -> dict:
        """Coefficient of dx_I, e.g. ``coefficient("xy")`` for dx^dy (signs applied)."""
        P = self.algebra
        idx = [P.generators.index(g) for g in gens]
        inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
        f = self.terms.get(tuple(sorted(idx)), {})
        return {m: (-c if inv % 2 else c) for m, c in f.items()}

    def to_str(self) -> str:
        P = self.algebra
        if not self.terms:
            return "0"
        parts = []
        for I_, f in sorted(self.terms.items()):
            w = "^".join(f"d{P.generators[i]}" for i in I_) or "1"
            parts.append(f"[{P.to_str(f)}] {w}")
        return " + ".join(parts)

    def __repr__(self):
        return f"KahlerForm(deg={self.degree}, 2pi i^{self.twopi_power}: {self.to_str()})"


FormSeq = dict   # degree -> KahlerForm


def _d_raw(f: dict, P) -> KahlerForm:
    """Ambient exterior derivative of a polynomial (inverse partners via -U^2 du)."""
    terms: dict = {}
    for m, c in f.items():
        for g, e in enumerate(m):
            if not e:
                continue
            q = list(m)
            q[g] -= 1
            primary = P.partner_of(g)
            if primary is None:
                axpy(terms.setdefault((g,), {}), e * c, {tuple(q): 1})
            else:
                # d(U^e) = e U^(e-1) dU = -e U^(e+1) du
                q[g] += 2
                axpy(terms.setdefault((primary,), {}), -e * c, {tuple(q): 1})
    return KahlerForm(P, 1, terms).pruned()


def d_poly(f: dict, P) -> KahlerForm:
    return _d_raw(P.normal_form(f), P)


# -- the comparison map ------------------------------------------------------

def mu_chain(vec: dict, P, twopi_power: int = 0) -> KahlerForm:
    """(1/n!) f0 df1 ^ ... ^ dfn on a homogeneous chain of basis forms."""
    degs = {len(t) - 1 for t in vec}
    if len(degs) > 1:
        raise DegreeMismatch("mu_chain needs a homogeneous chain")
    n = degs.pop() if degs else 0
    out = KahlerForm.zero(P, n, twopi_power)
    dcache: dict = {}
    for t, c in vec.items():
        w = KahlerForm.function(P, {t[0]: c}, twopi_power)
        for m in t[1:]:
            if m not in dcache:
                dcache[m] = _d_raw(P.normal_form({m: 1}), P)
            w = w.wedge(dcache[m])
            if w.is_zero():
                break
        out = out + KahlerForm(P, n, w.terms, twopi_power)
    return out.scaled(Fraction(1, factorial(n)))


def mu_map(c: GradedChain, P) -> FormSeq:
    return {n: mu_chain(v, P, c.power(n)) for n, v in sorted(c.components.items())}


# -- curvature and Chern-Weil ----------------------------------------------------

def matrix_d(X: AlgMatrix) -> list[list[KahlerForm]]:
    P = X.algebra
    return [[d_poly(x, P) for x in row] for row in X.entries]


def _lift(X: AlgMatrix) -> list[list[KahlerForm]]:
    P = X.algebra
    return [[KahlerForm.function(P, x) for x in row] for row in X.entries]


def matrix_wedge(M, N) -> list[list[KahlerForm]]:
    n, k, m = len(M), len(N), len(N[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for l in range(k):
                t = M[i][l].wedge(N[l][j])
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def _mtrace(M) -> KahlerForm:
    acc = M[0][0]
    for i in range(1, len(M)):
        acc = acc + M[i][i]
    return acc


@dataclass
class CurvatureForm:
    matrix: list
    idempotent: AlgMatrix

    def trace(self) -> KahlerForm:
        return _mtrace(self.matrix)


def grassmann_curvature(e: AlgMatrix, check: bool = True) -> CurvatureForm:
    """R = e (de)^2 for the connection e.d.e; asserts e (de)^2 = (de)^2 e."""
    if not is_idempotent(e):
        raise NotIdempotent("curvature needs an idempotent")
    de = matrix_d(e)
    E = _lift(e)
    dede = matrix_wedge(de, de)
    R = matrix_wedge(E, dede)
    if check:
        Rt = matrix_wedge(dede, E)
        for i in range(e.rows):
            for j in range(e.cols):
                if not R[i][j].equivalent(Rt[i][j]):
                    raise SideIdentityFailure(f"e(de)^2 != (de)^2 e at entry {(i, j)}")
    return CurvatureForm(R, e)


def ch_cw_even(e: AlgMatrix, N: int) -> FormSeq:
    """Degree 2n: (1/n!) Tr(e (de)^{2n}) with 2*pi*i power -n."""
    if not is_idempotent(e):
        raise NotIdempotent("ch_cw_even needs an idempotent")
    P = e.algebra
    de = matrix_d(e)
    M = _lift(e)
    out = {0: _mtrace(M)}
    for n in range(1, N + 1):
        M = matrix_wedge(matrix_wedge(M, de), de)
        t = _mtrace(M).scaled(Fraction(1, factorial(n)))
        out[2 * n] = KahlerForm(P, 2 * n, t.terms, -n)
    return out


def ch_cw_odd(g: AlgMatrix, N: int, g_inv: AlgMatrix | None = None) -> FormSeq:
    """Degree 2n+1: (-1)^n n!/(2n+1)! Tr((g^-1 dg)^{2n+1}), 2*pi*i power -n as printed."""
    P = g.algebra
    h = invert(g, g_inv) if g_inv is not None else invert(g)
    theta = matrix_wedge(_lift(h), matrix_d(g))
    out = {}
    M = theta
    for n in range(N + 1):
        if n:
            M = matrix_wedge(matrix_wedge(M, theta), theta)
        coeff = Fraction((-1) ** n * factorial(n), factorial(2 * n + 1))
        t = _mtrace(M).scaled(coeff)
        out[2 * n + 1] = KahlerForm(P, 2 * n + 1, t.terms, -n)
    return out


# -- currents ----------------------------------------------------------------------

def _dfact(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def sphere_moment(a: int, b: int, c: int) -> Fraction:
    """(1/4pi) * integral over S^2 of x^a y^b z^c dS."""
    if a % 2 or b % 2 or c % 2:
        return Fraction(0)
    return Fraction(_dfact(a - 1) * _dfact(b - 1) * _dfact(c - 1), _dfact(a + b + c + 1))


def sphere_integrate(w: KahlerForm, orientation: int = 1):
    """Integral over the unit sphere, as (q, m) meaning q * (2*pi*i)^m.

    For w = P dx^dy + Q dy^dz + R dz^dx the integral equals that of
    (P z + Q x + R y) against the area measure (outward normal).  The
    polynomial moments are exact rationals times 4*pi = -2i * (2*pi*i).
    """
    if w.degree != 2:
        raise DegreeMismatch("sphere integration needs a 2-form")
    S = w.algebra
    gx, gy, gz = (S.generators.index(v) for v in ("x", "y", "z"))
    P_ = w.coefficient("xy")
    Q_ = w.coefficient("yz")
    R_ = w.coefficient("zx")
    partners = {h_ for _, h_ in S.inverses}
    if any(m[k] for f in w.terms.values() for m in f for k in partners):
        raise NonPolynomial("coefficient involves an inverted generator")
    X, Y, Z = S.gen("x"), S.gen("y"), S.gen("z")
    h: dict = {}
    axpy(h, 1, S.mul(P_, Z))
    axpy(h, 1, S.mul(Q_, X))
    axpy(h, 1, S.mul(R_, Y))
    h = S.normal_form(h)
    total = Fraction(0)
    for m, c in h.items():
        total = total + c * sphere_moment(m[gx], m[gy], m[gz])
    q = simplify(total * GaussQ(0, -2) * orientation)
    return q, 1 + w.twopi_power


def circle_residue(w: KahlerForm, orientation: int = 1):
    """Residue pairing on the circle: for w = f du returns (a_{-1}, 1) meaning a_{-1} * 2*pi*i."""
    if w.degree != 1:
        raise DegreeMismatch("residue needs a 1-form")
    L = w.algebra
    prim = L.primary_generators()
    if len(prim) != 1:
        raise ValueError("circle residue needs a single primary generator")
    g = prim[0]
    f = w.terms.get((g,), {})
    partners = [b for a, b in L.inverses if a == g]
    if not partners:
        return 0, 1 + w.twopi_power
    target = [0] * L.ngens
    target[partners[0]] = 1
    res = f.get(tuple(target), 0)
    return simplify(res * orientation), 1 + w.twopi_power


@dataclass(frozen=True)
class PairingFunctional:
    """A closed current: its degree, the 2*pi*i power it contributes, orientation.

    The raw sphere integral and the raw residue contribute one power of
    2*pi*i; a normalized current ``(2*pi*i)^-1 * integral`` contributes none.
    """

    kind: str                  # "sphere-integration" | "circle-residue" | "point-evaluation"
    twopi_power: int = 1
    orientation: int = 1
    point: tuple = ()

    @property
    def degree(self) -> int:
        return {"sphere-integration": 2, "circle-residue": 1, "point-evaluation": 0}[self.kind]

    def evaluate(self, w: KahlerForm):
        """Value as (q, m) = q * (2*pi*i)^m including the current's own normalization."""
        if self.kind == "sphere-integration":
            q, m = sphere_integrate(w, self.orientation)
        elif self.kind == "circle-residue":
            q, m = circle_residue(w, self.orientation)
        elif self.kind == "point-evaluation":
            q, m = _evaluate_at(w, self.point), w.twopi_power
            return q, m + self.twopi_power
        else:
            raise ValueError(self.kind)
        # the raw integral carries exactly one power; rescale to the declared one
        return q, m - 1 + self.twopi_power


SPHERE = PairingFunctional("sphere-integration", 1)
CIRCLE = PairingFunctional("circle-residue", 1)
CIRCLE_NORMALIZED = PairingFunctional("circle-residue", 0)


def _evaluate_at(w: KahlerForm, point: tuple):
    if w.degree != 0:
        raise DegreeMismatch("point evaluation needs a function")
    f = w.terms.get((), {})
    total = 0
    for m, c in f.items():
        v = c
        for x, e in zip(point, m):
            v = v * (x ** e if e >= 0 else 1 / x ** (-e))
        total = total + v
    return simplify(total)


def pair(forms, tau: PairingFunctional):
    """Exact value of the current on the matching-degree component; powers must cancel."""
    if isinstance(forms, KahlerForm):
        forms = {forms.degree: forms}
    w = forms.get(tau.degree)
    if w is None:
        if forms and not any(k % 2 == tau.degree % 2 for k in forms):
            raise DegreeMismatch(f"no component of degree {tau.degree}")
        return 0
    if w.is_zero():
        return 0
    q, m = tau.evaluate(w)
    if m != 0 and q:
        raise NormalizationMismatch(f"2*pi*i power {m} left after pairing")
    return q


@dataclass
class ComparisonReport:
    kind: str
    cq_value: object
    cw_value: object
    degree: int

    @property
    def ok(self) -> bool:
        return self.cq_value == self.cw_value


def compare_cq_cw(x: AlgMatrix, tau: PairingFunctional, tau_cq: PairingFunctional | None = None,
                  N: int | None = None, alternating_sign: bool | None = None) -> ComparisonReport:
    """pair(mu c ch_CQ(x), tau_cq) versus pair(ch_CW(x), tau).

    Even input (idempotent) or odd input (invertible) is detected from x.
    ``tau_cq`` defaults to ``tau``; for odd classes the two routes carry
    different powers of 2*pi*i, so the currents are declared separately.
    """
    P = x.algebra
    deg = tau.degree
    if N is None:
        N = deg // 2
    tau_cq = tau_cq or tau
    if x.rows == x.cols and is_idempotent(x) and deg % 2 == 0:
        cq = apply_scaling_c(ch_cq_even(x, N, alternating_sign))
        cw = ch_cw_even(x, N)
        kind = "even"
    else:
        cq = apply_scaling_c(ch_cq_odd(x, N))
        cw = ch_cw_odd(x, N)
        kind = "odd"
    v_cq = pair(mu_map(cq, P), tau_cq)
    v_cw = pair(cw, tau)
    return ComparisonReport(kind, v_cq, v_cw, deg)


