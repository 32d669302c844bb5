"""Universal noncommutative differential forms Omega(A) and the operators d, b, kappa, B.

A basis form ``(i0, i1, ..., in)`` stands for ``a_{i0} da_{i1} ... da_{in}``
where ``i0`` runs over a basis of A and each ``ik`` (k >= 1) over a basis
of A/C.1, i.e. every basis key except the unit.  The same code serves
finite-dimensional algebras (integer keys, unit 0) and presented algebras
(monomial keys); only FD algebras have enumerable bases and cached
operator matrices.

Two routes compute b and B.  The defining route works inside the
differential graded algebra: ``b(w da) = (-1)^|w| [w, a]`` and
``B = sum_i kappa^i d`` with ``kappa(w da) = (-1)^|w| da.w``.  The fast
route uses the equivalent closed formulas on tensors (Hochschild boundary,
signed cyclic rotations) and is what the cached matrices are built from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .scalars import simplify
from .sparse import add_into, axpy, clean

__all__ = [
    "GradedChain", "NormalizationMismatch", "CapOverflow", "omega_basis", "omega_dim",
    "d_form", "b_form", "kappa_form", "B_form", "b_fast", "B_fast",
    "right_mul", "left_mul", "form_mul", "apply_b", "apply_B", "apply_kappa",
    "apply_d", "operator", "MixedIdentityReport", "verify_mixed_identities",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 8


class NormalizationMismatch(ValueError):
    """Arithmetic between components carrying different powers of 2*pi*i."""


class CapOverflow(ValueError):
    pass


# -- bases ----------------------------------------------------------------

def _require_unit_first(A) -> None:
    if hasattr(A, "has_unit_first") and not A.has_unit_first():
        raise ValueError(f"{A!r}: unit must be basis vector 0 (use unit_first())")


def omega_basis(A, n: int) -> list[tuple]:
    _require_unit_first(A)
    d = A.dim
    return [(i0,) + rest for i0 in range(d) for rest in product(range(1, d), repeat=n)]


def omega_dim(A, n: int) -> int:
    return A.dim * (A.dim - 1) ** n


# -- single forms (sparse vectors over basis tuples) ----------------------

def _proj(vec: dict, unit) -> Iterable:
    return ((k, c) for k, c in vec.items() if k != unit)


def d_form(v: dict, A) -> dict:
    """d(a0 da1 ... dan) = da0 da1 ... dan."""
    u = A.unit_key
    out: dict = {}
    for t, c in v.items():
        if t[0] != u:
            add_into(out, (u,) + t, c)
    return out


def left_mul(a: dict, v: dict, A) -> dict:
    """a . (a0 da1 ... dan) = (a a0) da1 ... dan."""
    out: dict = {}
    for k, ca in a.items():
        for t, c in v.items():
            for m, cm in A.mul_basis(k, t[0]).items():
                add_into(out, (m,) + t[1:], ca * c * cm)
    return out


def right_mul(v: dict, a: dict, A) -> dict:
    """(w da_n) . a = w d(a_n a) - (w a_n) da, applied recursively."""
    u = A.unit_key
    out: dict = {}
    for t, c in v.items():
        for k, ca in a.items():
            axpy(out, c * ca, _right_mul_basis(t, k, A, u))
    return out


def _right_mul_basis(t: tuple, k, A, u) -> dict:
    if len(t) == 1:
        return {(m,): c for m, c in A.mul_basis(t[0], k).items()}
    head, last = t[:-1], t[-1]
    out: dict = {}
    for m, c in _proj(A.mul_basis(last, k), u):
        add_into(out, head + (m,), c)
    if k != u:
        for s, c in _right_mul_basis(head, last, A, u).items():
            add_into(out, s + (k,), -c)
    return out


def form_mul(v: dict, w: dict, A) -> dict:
    """Product in Omega(A): (w) . (b0 db1 ... dbm) = (w b0) db1 ... dbm."""
    out: dict = {}
    for s, cs in w.items():
        prod = right_mul(v, {s[0]: 1}, A)
        tail = s[1:]
        for t, c in prod.items():
            add_into(out, t + tail, c * cs)
    return out


def b_form(v: dict, A) -> dict:
    """Hochschild boundary from its definition b(w da) = (-1)^|w| (w a - a w)."""
    u = A.unit_key
    out: dict = {}
    for t, c in v.items():
        n = len(t) - 1
        if n == 0:
            continue
        w = {t[:-1]: 1}
        a = {t[-1]: 1}
        sign = -1 if (n - 1) % 2 else 1
        axpy(out, sign * c, right_mul(w, a, A))
        axpy(out, -sign * c, left_mul(a, w, A))
    return out


def kappa_form(v: dict, A) -> dict:
    """Karoubi operator kappa(w da) = (-1)^|w| da . w; identity in degree 0."""
    u = A.unit_key
    out: dict = {}
    for t, c in v.items():
        n = len(t) - 1
        if n == 0:
            add_into(out, t, c)
            continue
        a, a0, mid = t[-1], t[0], t[1:-1]
        sign = -c if (n - 1) % 2 else c
        # da . (a0 da1 ...) = d(a a0) da1 ... - a da0 da1 ...
        for m, cm in _proj(A.mul_basis(a, a0), u):
            add_into(out, (u, m) + mid, sign * cm)
        if a0 != u:
            add_into(out, (a, a0) + mid, -sign)
    return out


def B_form(v: dict, A) -> dict:
    """Connes' operator from its definition B = sum_{i=0}^{n} kappa^i d."""
    out: dict = {}
    by_deg: dict = {}
    for t, c in v.items():
        by_deg.setdefault(len(t) - 1, {})[t] = c
    for n, comp in by_deg.items():
        cur = d_form(comp, A)
        for _ in range(n + 1):
            axpy(out, 1, cur)
            cur = kappa_form(cur, A)
    return out


def b_fast(t: tuple, A) -> dict:
    """Closed-form Hochschild boundary of one basis form."""
    n = len(t) - 1
    out: dict = {}
    if n == 0:
        return out
    u = A.unit_key
    mul = A.mul_basis
    rest = t[2:]
    for m, c in mul(t[0], t[1]).items():
        add_into(out, (m,) + rest, c)
    for i in range(1, n):
        s = -1 if i % 2 else 1
        pre, post = t[:i], t[i + 2:]
        for m, c in mul(t[i], t[i + 1]).items():
            if m != u:
                add_into(out, pre + (m,) + post, s * c)
    s = -1 if n % 2 else 1
    mid = t[1:n]
    for m, c in mul(t[n], t[0]).items():
        add_into(out, (m,) + mid, s * c)
    return out


def B_fast(t: tuple, A) -> dict:
    """Closed-form B: signed cyclic rotations of d a0 da1 ... dan."""
    u = A.unit_key
    if t[0] == u:
        return {}
    n = len(t) - 1
    out: dict = {}
    for i in range(n + 1):
        rot = t[n + 1 - i:] + t[:n + 1 - i]
        add_into(out, (u,) + rot, -1 if (n * i) % 2 else 1)
    return out


# -- graded chains --------------------------------------------------------

@dataclass
class GradedChain:
    """Degree -> sparse vector, each degree tagged with its power of 2*pi*i."""

    components: dict = field(default_factory=dict)
    twopi: dict = field(default_factory=dict)

    @classmethod
    def from_vector(cls, vec: dict, twopi_power: int = 0) -> "GradedChain":
        comps: dict = {}
        for t, c in vec.items():
            if c:
                comps.setdefault(len(t) - 1, {})[t] = c
        return cls(comps, {n: twopi_power for n in comps})

    def power(self, n: int) -> int:
        return self.twopi.get(n, 0)

    def component(self, n: int) -> dict:
        return self.components.get(n, {})

    def degrees(self) -> list[int]:
        return sorted(n for n, v in self.components.items() if v)

    def pruned(self) -> "GradedChain":
        comps = {n: clean(v) for n, v in self.components.items()}
        comps = {n: v for n, v in comps.items() if v}
        return GradedChain(comps, {n: self.twopi.get(n, 0) for n in comps})

    def is_zero(self) -> bool:
        return not any(clean(v) for v in self.components.values())

    def _combine(self, other: "GradedChain", c) -> "GradedChain":
        comps = {n: dict(v) for n, v in self.components.items()}
        tw = dict(self.twopi)
        for n, v in other.components.items():
            if not clean(v):
                continue
            if n in comps and comps[n] and tw.get(n, 0) != other.power(n):
                raise NormalizationMismatch(
                    f"degree {n}: 2*pi*i powers {tw.get(n, 0)} vs {other.power(n)}")
            if not comps.get(n):
                tw[n] = other.power(n)
            axpy(comps.setdefault(n, {}), c, v)
        return GradedChain(comps, tw).pruned()

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scaled(self, c) -> "GradedChain":
        return GradedChain({n: {t: simplify(c * x) for t, x in v.items()}
                            for n, v in self.components.items()}, dict(self.twopi)).pruned()

    def truncated(self, max_degree: int) -> "GradedChain":
        return GradedChain({n: v for n, v in self.components.items() if n <= max_degree},
                           {n: p for n, p in self.twopi.items() if n <= max_degree})

    def flat(self) -> dict:
        out: dict = {}
        for v in self.components.values():
            axpy(out, 1, v)
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedChain):
            return NotImplemented
        a, b = self.pruned(), other.pruned()
        return a.components == b.components and a.twopi == b.twopi


def _apply(c: GradedChain, fn, shift: int, cap: int | None = None,
           allow_truncation: bool = False) -> GradedChain:
    comps: dict = {}
    tw: dict = {}
    for n, v in c.components.items():
        m = n + shift
        if m < 0:
            continue
        if cap is not None and m > cap:
            if not allow_truncation and clean(v):
                raise CapOverflow(f"result degree {m} exceeds cap {cap}")
            continue
        img = fn(v)
        if img:
            axpy(comps.setdefault(m, {}), 1, img)
            tw[m] = c.power(n)
    return GradedChain(comps, tw).pruned()


def _termwise(f, A):
    def run(v: dict) -> dict:
        out: dict = {}
        for t, c in v.items():
            axpy(out, c, f(t, A))
        return out
    return run


def apply_b(c: GradedChain, A, route: str = "fast") -> GradedChain:
    """Hochschild boundary; ``route="definition"`` uses the product in Omega(A)."""
    fn = _termwise(b_fast, A) if route == "fast" else (lambda v: b_form(v, A))
    return _apply(c, fn, -1)


def apply_kappa(c: GradedChain, A) -> GradedChain:
    return _apply(c, lambda v: kappa_form(v, A), 0)


def apply_d(c: GradedChain, A, cap: int | None = None, allow_truncation: bool = False):
    return _apply(c, lambda v: d_form(v, A), 1, cap, allow_truncation)


def apply_B(c: GradedChain, A, cap: int | None = DEFAULT_CAP,
            allow_truncation: bool = False, route: str = "fast") -> GradedChain:
    """Connes' B; components pushed past ``cap`` raise unless truncation is allowed."""
    fn = _termwise(B_fast, A) if route == "fast" else (lambda v: B_form(v, A))
    return _apply(c, fn, 1, cap, allow_truncation)


# -- cached operator matrices (FD algebras) ---------------------------------

_FAST = {"b": b_fast, "B": B_fast}


def operator(A, name: str, n: int) -> dict:
    """Columns of b, B, d or kappa on the basis of Omega^n A: ``{source: {target: c}}``."""
    key = ("op", name, n)
    hit = A._cache.get(key)
    if hit is not None:
        return hit
    basis = omega_basis(A, n)
    if name in _FAST:
        f = _FAST[name]
        cols = {t: f(t, A) for t in basis}
    elif name == "d":
        cols = {t: d_form({t: 1}, A) for t in basis}
    elif name == "kappa":
        cols = {t: kappa_form({t: 1}, A) for t in basis}
    else:
        raise KeyError(name)
    A._cache[key] = cols
    return cols


def apply_op(cols: dict, v: dict) -> dict:
    out: dict = {}
    for t, c in v.items():
        col = cols[t]
        if c == 1:
            for s, x in col.items():
                add_into(out, s, x)
        else:
            for s, x in col.items():
                add_into(out, s, c * x)
    return out


class _LazyColumns(dict):
    """Operator columns computed on demand (for degrees too large to tabulate)."""

    def __init__(self, A, name: str):
        super().__init__()
        self._f = _FAST[name]
        self._A = A

    def __missing__(self, t):
        col = self._f(t, self._A)
        self[t] = col
        return col


def _columns(A, name: str, n: int, limit: int | None):
    if limit is not None and n > limit:
        return _LazyColumns(A, name)
    return operator(A, name, n)


def _compose_is_zero(A, first: str, n: int, second: str, limit: int | None = None) -> bool:
    shift = -1 if first == "b" else 1
    c1 = operator(A, first, n)
    c2 = _columns(A, second, n + shift, limit)
    return all(not apply_op(c2, col) for col in c1.values())


def _anticommutator_is_zero(A, n: int, limit: int | None = None) -> bool:
    bB = _columns(A, "b", n + 1, limit)
    Bn = operator(A, "B", n)
    bn = operator(A, "b", n) if n > 0 else None
    Bb = operator(A, "B", n - 1) if n > 0 else None
    for t, col in Bn.items():
        acc = apply_op(bB, col)
        if bn is not None:
            axpy(acc, 1, apply_op(Bb, bn[t]))
        if acc:
            return False
    return True


@dataclass
class MixedIdentityReport:
    max_degree: int
    b_squared: dict = field(default_factory=dict)        # source degree -> bool
    B_squared: dict = field(default_factory=dict)
    anticommutator: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.b_squared.values()) and all(self.B_squared.values()) \
            and all(self.anticommutator.values())


def verify_mixed_identities(A, max_degree: int, sources: bool = False) -> MixedIdentityReport:
    """Check b^2 = B^2 = bB + Bb = 0 exactly on basis forms.

    By default only composites whose degrees stay <= max_degree are
    checked.  With ``sources=True`` every identity is applied to every basis
    form of degree <= max_degree, even when the composite passes through
    degree max_degree + 2.
    """
    rep = MixedIdentityReport(max_degree)
    top_B = max_degree if sources else max_degree - 2
    top_ac = max_degree if sources else max_degree - 1
    limit = max_degree if sources else None
    for n in range(max_degree + 1):
        rep.b_squared[n] = _compose_is_zero(A, "b", n, "b") if n >= 2 else True
    for n in range(top_B + 1):
        rep.B_squared[n] = _compose_is_zero(A, "B", n, "B", limit)
    for n in range(top_ac + 1):
        rep.anticommutator[n] = _anticommutator_is_zero(A, n, limit)
    return rep
