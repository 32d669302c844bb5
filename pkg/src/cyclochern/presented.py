"""Commutative algebras given by generators and a confluent rewrite system.

Elements are sparse dicts ``{monomial: scalar}`` where a monomial is an
exponent tuple over the generators.  Normal forms are computed by
rewriting with user rules that strictly decrease a degree-lexicographic
order; local confluence is checked on every critical pair up to the
degree cap when the algebra is built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .scalars import I, as_scalar, div, format_scalar
from .sparse import add_into, axpy, clean

__all__ = ["PresentedAlgebra", "DegreeOverflow", "RewriteError", "normal_form",
           "sphere", "laurent", "polynomial_ring", "truncated"]


class DegreeOverflow(ArithmeticError):
    pass


class RewriteError(ValueError):
    pass


def _deg(m) -> int:
    return sum(m)


@dataclass(frozen=True, eq=False)
class PresentedAlgebra:
    generators: tuple
    rules: tuple                 # ((lhs monomial, {monomial: scalar}), ...)
    order: tuple                 # generator indices, most significant first
    degree_cap: int = 32
    inverses: tuple = ()         # ((g, partner), ...) with g primary
    name: str = ""
    smooth: bool = False         # relations cut out a smooth complete intersection
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- construction -------------------------------------------------------
    @classmethod
    def build(cls, generators: Sequence[str], rules=(), order: Sequence[str] | None = None,
              inverses: dict | None = None, degree_cap: int = 32, name: str = "",
              smooth: bool = False, check: bool = True) -> "PresentedAlgebra":
        """Rules may be given as ``(lhs, rhs)`` strings or as monomial/dict pairs.

        ``inverses`` maps a generator name to the name of its declared
        inverse; the partner is added as a generator if missing and the rule
        ``g * partner -> 1`` is appended.
        """
        gens = list(generators)
        inv_pairs = []
        for g, h in (inverses or {}).items():
            if h not in gens:
                gens.append(h)
            inv_pairs.append((gens.index(g), gens.index(h)))
        if order is None:
            order_idx = tuple(range(len(gens)))
        else:
            order_idx = tuple(gens.index(g) for g in order)
            order_idx += tuple(i for i in range(len(gens)) if i not in order_idx)
        proto = cls(tuple(gens), (), order_idx, degree_cap, tuple(inv_pairs), name, smooth)
        parsed = []
        for lhs, rhs in rules:
            if isinstance(lhs, str):
                lp = proto.parse(lhs, allow_inverse=False)
                if len(lp) != 1 or list(lp.values())[0] != 1:
                    raise RewriteError(f"rule left side must be a monomial: {lhs!r}")
                lhs = next(iter(lp))
            if isinstance(rhs, str):
                rhs = proto.parse(rhs, allow_inverse=False)
            parsed.append((tuple(lhs), clean(dict(rhs))))
        for g, h in inv_pairs:
            m = [0] * len(gens)
            m[g] += 1
            m[h] += 1
            parsed.append((tuple(m), {proto.unit_key: 1}))
        alg = cls(tuple(gens), tuple(parsed), order_idx, degree_cap, tuple(inv_pairs), name, smooth)
        if check:
            alg.check_rules()
        return alg

    # -- ordering -------------------------------------------------------------
    def order_key(self, m):
        return (_deg(m), tuple(m[i] for i in self.order))

    @property
    def unit_key(self):
        return (0,) * len(self.generators)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def gen(self, name: str) -> dict:
        m = [0] * self.ngens
        m[self.generators.index(name)] = 1
        return {tuple(m): 1}

    def primary_generators(self) -> list[int]:
        partners = {h for _, h in self.inverses}
        return [i for i in range(self.ngens) if i not in partners]

    def partner_of(self, h: int):
        for g, p in self.inverses:
            if p == h:
                return g
        return None

    def is_inverse_rule(self, lhs) -> bool:
        for g, h in self.inverses:
            m = [0] * self.ngens
            m[g] += 1
            m[h] += 1
            if tuple(m) == tuple(lhs):
                return True
        return False

    def check_rules(self) -> None:
        """Raise RewriteError on non-decreasing rules or a failing critical pair."""
        for lhs, rhs in self.rules:
            for m in rhs:
                if self.order_key(m) >= self.order_key(lhs):
                    raise RewriteError(
                        f"rule {self.mono_str(lhs)} -> ... does not decrease the order at "
                        f"{self.mono_str(m)}")
        failures = self.critical_pair_failures()
        if failures:
            raise RewriteError(f"rewrite system is not confluent: {failures[:3]}")

    def critical_pair_failures(self) -> list:
        out = []
        for a in range(len(self.rules)):
            for b in range(a + 1, len(self.rules)):
                la, ra = self.rules[a]
                lb, rb = self.rules[b]
                if all(min(x, y) == 0 for x, y in zip(la, lb)):
                    continue
                L = tuple(max(x, y) for x, y in zip(la, lb))
                if _deg(L) > self.degree_cap:
                    continue
                qa = tuple(x - y for x, y in zip(L, la))
                qb = tuple(x - y for x, y in zip(L, lb))
                sa = self.normal_form({tuple(p + q for p, q in zip(m, qa)): c for m, c in ra.items()})
                sb = self.normal_form({tuple(p + q for p, q in zip(m, qb)): c for m, c in rb.items()})
                if sa != sb:
                    out.append((self.mono_str(L), self.to_str(sa), self.to_str(sb)))
        return out

    # -- arithmetic -----------------------------------------------------------
    def _nf_mono(self, m) -> dict:
        cache = self._cache.setdefault("nf", {})
        hit = cache.get(m)
        if hit is not None:
            return hit
        if _deg(m) > self.degree_cap:
            raise DegreeOverflow(f"monomial {self.mono_str(m)} exceeds degree cap {self.degree_cap}")
        out: dict = {m: 1}
        for lhs, rhs in self.rules:
            if all(x >= y for x, y in zip(m, lhs)):
                q = tuple(x - y for x, y in zip(m, lhs))
                out = {}
                for r, c in rhs.items():
                    axpy(out, c, self._nf_mono(tuple(a + b for a, b in zip(r, q))))
                break
        cache[m] = out
        return out

    def normal_form(self, expr: dict) -> dict:
        out: dict = {}
        for m, c in expr.items():
            if c:
                axpy(out, c, self._nf_mono(tuple(m)))
        return clean(out)

    normalize = normal_form

    def mul_basis(self, a, b) -> dict:
        return self._nf_mono(tuple(x + y for x, y in zip(a, b)))

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, ca * cb, self.mul_basis(a, b))
        return clean(out)

    def one(self) -> dict:
        return {self.unit_key: 1}

    def is_commutative(self) -> bool:
        return True

    def invert_element(self, x: dict) -> dict:
        """Inverse of c * (monomial in invertible generators)."""
        from .linalg import NotInvertible
        if len(x) != 1:
            raise NotInvertible("only scalar multiples of invertible monomials are inverted here")
        (m, c), = x.items()
        partner = {}
        for g, h in self.inverses:
            partner[g], partner[h] = h, g
        inv = [0] * self.ngens
        for i, e in enumerate(m):
            if e:
                if i not in partner:
                    raise NotInvertible(f"generator {self.generators[i]} has no declared inverse")
                inv[partner[i]] += e
        return self.normal_form({tuple(inv): div(1, c)})

    # -- text -------------------------------------------------------------------
    def mono_str(self, m) -> str:
        parts = []
        for g, e in zip(self.generators, m):
            if e == 1:
                parts.append(g)
            elif e:
                parts.append(f"{g}^{e}")
        return "*".join(parts) or "1"

    def to_str(self, x: dict) -> str:
        if not x:
            return "0"
        terms = []
        for m in sorted(x, key=self.order_key, reverse=True):
            terms.append(f"({format_scalar(x[m])})*{self.mono_str(m)}")
        return " + ".join(terms)

    def parse(self, text: str, allow_inverse: bool = True) -> dict:
        """Parse a polynomial string; ``i`` is the imaginary unit, ``g^-k`` uses g's inverse."""
        import sympy
        syms = {g: sympy.Symbol(g) for g in self.generators}
        local = dict(syms)
        local.setdefault("i", sympy.I)
        local.setdefault("I", sympy.I)
        expr = sympy.expand(sympy.sympify(text.replace("^", "**"), locals=local))
        partner = {}
        for g, h in self.inverses:
            partner[g], partner[h] = h, g
        out: dict = {}
        for term, coeff in expr.as_coefficients_dict().items():
            c = 1
            m = [0] * self.ngens
            for base, e in term.as_powers_dict().items():
                if base == sympy.I:
                    c = c * (I ** int(e))
                    continue
                if base.is_number:
                    c = c * as_scalar(base ** e)
                    continue
                name = str(base)
                if name not in syms:
                    raise RewriteError(f"unknown symbol {name!r}")
                k = self.generators.index(name)
                e = int(e)
                if e < 0:
                    if not allow_inverse or k not in partner:
                        raise RewriteError(f"negative power of {name} without declared inverse")
                    m[partner[k]] += -e
                else:
                    m[k] += e
            add_into(out, tuple(m), c * as_scalar(coeff))
        return self.normal_form(out) if self.rules else clean(out)

    def __repr__(self):
        return f"PresentedAlgebra({self.name or ','.join(self.generators)})"


def normal_form(expr, P: PresentedAlgebra) -> dict:
    if isinstance(expr, str):
        expr = P.parse(expr)
    return P.normal_form(expr)


def sphere(degree_cap: int = 32) -> PresentedAlgebra:
    """Coordinate ring of S^2: C[x, y, z]/(x^2 + y^2 + z^2 - 1)."""
    return PresentedAlgebra.build(["x", "y", "z"], [("z^2", "1 - x^2 - y^2")],
                                  order=["z", "y", "x"], degree_cap=degree_cap, name="S2",
                                  smooth=True)


def laurent(var: str = "u", inv: str | None = None, degree_cap: int = 64) -> PresentedAlgebra:
    """C[u, u^-1], the inverse generator named ``inv`` (default ``var + 'i'``)."""
    inv = inv or f"{var}i"
    return PresentedAlgebra.build([var], [], inverses={var: inv}, degree_cap=degree_cap,
                                  name=f"C[{var},{var}^-1]")


def polynomial_ring(gens: Sequence[str], degree_cap: int = 32) -> PresentedAlgebra:
    return PresentedAlgebra.build(list(gens), [], degree_cap=degree_cap,
                                  name=f"C[{','.join(gens)}]")


def truncated(var: str, m: int, degree_cap: int = 32) -> PresentedAlgebra:
    return PresentedAlgebra.build([var], [(f"{var}^{m}", "0")], degree_cap=degree_cap,
                                  name=f"C[{var}]/({var}^{m})")


