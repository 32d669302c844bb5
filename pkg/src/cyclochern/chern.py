"""Cuntz-Quillen Chern characters of idempotents and invertibles in Omega(A).

Traces of products of matrices of forms are expanded by matrix-index
contraction: ``x0 dx1 ... dxm`` with every ``xk`` a sparse algebra element
expands multilinearly into basis forms, because ``d`` kills the unit.
The raw cycles carry 2*pi*i power 0; :func:`apply_scaling_c` normalizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import AlgMatrix, DimensionMismatch, invert, is_idempotent
from .forms import DEFAULT_CAP, GradedChain, apply_B, apply_b, omega_basis
from .linalg import solve
from .sparse import add_into, axpy, clean

__all__ = [
    "ch_cq_even", "ch_cq_odd", "verify_cycle", "cycle_defects", "apply_scaling_c",
    "trace_word", "NotIdempotent", "ConjugationReport", "conjugate_class_check",
    "boundary_solve",
]

ALTERNATING_SIGN_DEFAULT = False


class NotIdempotent(ValueError):
    pass


def _as_forms(X: AlgMatrix) -> list[list[dict]]:
    return [[{(k,): c for k, c in x.items()} for x in row] for row in X.entries]


def _times_d(M: list[list[dict]], X: AlgMatrix, unit) -> list[list[dict]]:
    """Matrix of forms M times the matrix of one-forms dX."""
    n, m = len(M), X.cols
    out = [[{} for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for j, Mij in enumerate(M[i]):
            if not Mij:
                continue
            for l in range(m):
                x = X.entries[j][l]
                for k, c in x.items():
                    if k == unit:
                        continue
                    tgt = out[i][l]
                    for t, ct in Mij.items():
                        add_into(tgt, t + (k,), ct * c)
    return out


def trace_word(head: AlgMatrix, diffs: list[AlgMatrix]) -> dict:
    """Tr(head . dX1 . dX2 ... dXm) as a sparse vector over basis forms."""
    unit = head.algebra.unit_key
    M = _as_forms(head)
    for X in diffs:
        M = _times_d(M, X, unit)
    if len(M) != len(M[0]):
        raise DimensionMismatch("trace of a non-square product")
    out: dict = {}
    for i in range(len(M)):
        axpy(out, 1, M[i][i])
    return clean(out)


def ch_cq_even(e: AlgMatrix, N: int, alternating_sign: bool | None = None,
               check: bool = True) -> GradedChain:
    """Tr e + sum_{n=1}^{N} (+-1)^n (2n)!/n! Tr((e - 1/2)(de)^{2n}), raw normalization."""
    if alternating_sign is None:
        alternating_sign = ALTERNATING_SIGN_DEFAULT
    if check and not is_idempotent(e):
        raise NotIdempotent("ch_cq_even needs an idempotent matrix")
    A = e.algebra
    comps = {0: trace_word(e, [])}
    shifted = e - AlgMatrix.identity(A, e.rows).scaled(Fraction(1, 2))
    for n in range(1, N + 1):
        coeff = factorial(2 * n) // factorial(n)
        if alternating_sign and n % 2:
            coeff = -coeff
        comps[2 * n] = {t: coeff * c for t, c in trace_word(shifted, [e] * (2 * n)).items()}
    return GradedChain(comps, {k: 0 for k in comps}).pruned()


def ch_cq_odd(g: AlgMatrix, N: int, g_inv: AlgMatrix | None = None) -> GradedChain:
    """sum_{n=0}^{N} n! Tr(g^-1 dg (dg^-1 dg)^n), raw normalization."""
    h = invert(g, g_inv) if g_inv is not None else invert(g)
    comps = {}
    for n in range(N + 1):
        word = [g] + [h, g] * n
        comps[2 * n + 1] = {t: factorial(n) * c for t, c in trace_word(h, word).items()}
    return GradedChain(comps, {k: 0 for k in comps}).pruned()


def apply_scaling_c(c: GradedChain) -> GradedChain:
    """Degree 2k gets (2*pi*i)^-k, degree 2k+1 gets (2*pi*i)^-(k+1)."""
    tw = {}
    for n in c.components:
        k = n // 2
        tw[n] = c.power(n) - (k if n % 2 == 0 else k + 1)
    return GradedChain({n: dict(v) for n, v in c.components.items()}, tw)


def _top(c: GradedChain) -> int:
    degs = c.degrees()
    return max(degs) if degs else 0


def cycle_defects(c: GradedChain, A, top: int | None = None) -> dict:
    """Nonzero components of (B - b)c below the top degree of c."""
    top = _top(c) if top is None else top
    img = apply_B(c, A, cap=None) - apply_b(c, A)
    return {n: v for n, v in img.components.items() if n <= top - 1 and clean(v)}


def verify_cycle(c: GradedChain, A, N: int | None = None) -> bool:
    """(B - b)c = 0 in every degree below the top one (the top leaks past the truncation)."""
    return not cycle_defects(c, A, None if N is None else _top(c))


# -- conjugation invariance -----------------------------------------------

def _boundary_columns(A, degrees: list[int], src_parity: int):
    """Columns of (B - b) from forms of parity ``src_parity`` into degrees <= max(degrees)."""
    top = max(degrees)
    cols, keys = [], []
    for n in range(src_parity, top + 2, 2):
        for t in omega_basis(A, n):
            col: dict = {}
            if n + 1 <= top:
                for s, x in _fast_B(t, A).items():
                    add_into(col, s, x)
            if n >= 1:
                for s, x in _fast_b(t, A).items():
                    add_into(col, s, -x)
            cols.append(col)
            keys.append(t)
    return cols, keys


def _fast_B(t, A):
    from .forms import B_fast
    return B_fast(t, A)


def _fast_b(t, A):
    from .forms import b_fast
    return b_fast(t, A)


def boundary_solve(target: GradedChain, A, max_degree: int):
    """Find y with (B - b) y = target in degrees <= max_degree, or None."""
    degs = [n for n in target.degrees() if n <= max_degree]
    if not degs:
        return GradedChain()
    parity = (degs[0] + 1) % 2
    for n in degs:
        if n % 2 != degs[0] % 2:
            raise ValueError("target must be homogeneous in parity")
    cols, keys = _boundary_columns(A, [max_degree - (max_degree - degs[0]) % 2], parity)
    tgt: dict = {}
    for n in degs:
        axpy(tgt, 1, target.component(n))
    x = solve(cols, tgt)
    if x is None:
        return None
    return GradedChain.from_vector({keys[j]: v for j, v in x.items()})


@dataclass
class ConjugationReport:
    difference_zero: bool
    is_boundary: bool
    checked_degrees: list = field(default_factory=list)
    degree0_equal: bool = True
    witness: GradedChain | None = None

    @property
    def ok(self) -> bool:
        return self.difference_zero or self.is_boundary


def conjugate_class_check(e: AlgMatrix, g: AlgMatrix, cap: int = DEFAULT_CAP,
                          alternating_sign: bool | None = None) -> ConjugationReport:
    """ch(g e g^-1) - ch(e) is a (B - b)-boundary through degree cap - 2."""
    if not is_idempotent(e):
        raise NotIdempotent("conjugate_class_check needs an idempotent")
    h = invert(g)
    f = g @ e @ h
    top = cap - 2
    N = top // 2
    diff = ch_cq_even(f, N, alternating_sign) - ch_cq_even(e, N, alternating_sign)
    diff = diff.truncated(top)
    degs = [n for n in range(0, top + 1, 2)]
    d0 = not clean(diff.component(0))
    if diff.is_zero():
        return ConjugationReport(True, True, degs, d0)
    A = e.algebra
    # the top component is only determined modulo b of the next degree, so
    # solve through degree top - 1 boundaries and compare exactly below the top
    y = boundary_solve(diff, A, top)
    return ConjugationReport(False, y is not None, degs, d0, y)
