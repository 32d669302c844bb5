"""Finite-dimensional algebras by structure constants, and matrices over algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .linalg import NotInvertible, inverse_dense, solve
from .scalars import as_scalar, div, simplify
from .sparse import add_into, axpy, clean, scale

__all__ = [
    "FDAlgebra", "ValidationReport", "validate_algebra", "AlgMatrix",
    "is_idempotent", "invert", "AlgebraError", "DimensionMismatch",
    "NotInvertible", "Unverifiable", "complex_numbers", "direct_power",
    "truncated_polynomial", "matrix_units", "change_basis", "change_basis_with_map",
]


class AlgebraError(ValueError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class Unverifiable(AlgebraError):
    """No way to produce or certify an inverse (presented algebra without a candidate)."""


@dataclass(frozen=True, eq=False)
class FDAlgebra:
    """Unital algebra with basis ``labels`` and ``table[i][j] = e_i * e_j``.

    The package-wide convention is that basis element 0 is the unit; use
    :meth:`unit_first` to adapt an algebra whose unit is a combination.
    ``idempotents`` optionally records a complete system of orthogonal
    idempotents; the homology engine uses it to shrink the chain complex.
    """

    labels: tuple
    table: tuple
    unit: dict
    name: str = ""
    idempotents: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_table(cls, labels: Sequence[str], table, unit=None, name: str = "",
                   idempotents=None) -> "FDAlgebra":
        n = len(labels)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                entry = table[i][j] if not isinstance(table, dict) else table.get((i, j), {})
                row.append(clean({int(k): as_scalar(v) for k, v in dict(entry).items()}))
            rows.append(tuple(row))
        if unit is None:
            unit = {0: 1}
        unit = clean({int(k): as_scalar(v) for k, v in dict(unit).items()})
        idem = None
        if idempotents is not None:
            idem = tuple(clean({int(k): as_scalar(v) for k, v in dict(e).items()})
                         for e in idempotents)
        return cls(tuple(labels), tuple(rows), unit, name, idem)

    # -- basic structure ------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def unit_key(self):
        return 0

    def has_unit_first(self) -> bool:
        return self.unit == {0: 1}

    def mul_basis(self, i: int, j: int) -> dict:
        return self.table[i][j]

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            row = self.table[i]
            for j, b in y.items():
                ab = a * b
                for k, c in row[j].items():
                    add_into(out, k, ab * c)
        return out

    def one(self) -> dict:
        return dict(self.unit)

    def basis_vector(self, i: int) -> dict:
        return {i: 1}

    def normalize(self, x: dict) -> dict:
        return clean(x)

    def commutator_span(self) -> list[dict]:
        return [axpy(dict(self.table[i][j]), -1, self.table[j][i])
                for i in range(self.dim) for j in range(i + 1, self.dim)]

    def is_commutative(self) -> bool:
        return all(not v for v in self.commutator_span())

    def left_matrix(self, x: dict) -> list[dict]:
        """Columns of left multiplication by x in the basis."""
        return [self.mul(x, {j: 1}) for j in range(self.dim)]

    def unit_first(self) -> "FDAlgebra":
        """Equivalent algebra whose basis vector 0 is the unit."""
        return self.unit_first_with_map()[0]

    def unit_first_with_map(self):
        """(adapted algebra, coordinate converter old -> new).

        The first basis index carrying the unit is replaced by the unit
        itself; all other basis vectors are kept in order.
        """
        if self.has_unit_first():
            return self, dict
        u = self.unit
        if not u:
            raise AlgebraError("algebra has zero unit")
        ks = min(u)
        cs = u[ks]
        others = [k for k in range(self.dim) if k != ks]
        new_index = {k: t + 1 for t, k in enumerate(others)}

        def convert(x: dict) -> dict:
            out: dict = {}
            xs = x.get(ks, 0)
            if xs:
                t = div(xs, cs)
                add_into(out, 0, t)
                for k, c in u.items():
                    if k != ks:
                        add_into(out, new_index[k], -c * t)
            for k, c in x.items():
                if k != ks:
                    add_into(out, new_index[k], c)
            return clean(out)

        vecs = [dict(u)] + [{k: 1} for k in others]
        table = [[convert(self.mul(a, b)) for b in vecs] for a in vecs]
        labels = ("1",) + tuple(self.labels[k] for k in others)
        idem = None
        if self.idempotents is not None:
            idem = tuple(convert(e) for e in self.idempotents)
        return FDAlgebra.from_table(labels, table, {0: 1}, self.name, idem), convert

    def __repr__(self):
        return f"FDAlgebra({self.name or '?'}, dim={self.dim})"


@dataclass
class ValidationReport:
    associativity_failures: list = field(default_factory=list)
    unit_failures: list = field(default_factory=list)
    missing: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.associativity_failures or self.unit_failures or self.missing)

    def __bool__(self):
        return self.ok


def validate_algebra(A: FDAlgebra) -> ValidationReport:
    """Brute-force check of associativity and the two-sided unit.

    Triples are reported 1-based, as (i, j, k) for (e_i e_j) e_k != e_i (e_j e_k).
    """
    rep = ValidationReport()
    n = A.dim
    if len(A.table) != n or any(len(r) != n for r in A.table):
        rep.missing.append("structure table is not dim x dim")
        return rep
    for i, j, k in product(range(n), repeat=3):
        left = A.mul(A.table[i][j], {k: 1})
        right = A.mul({i: 1}, A.table[j][k])
        if clean(left) != clean(right):
            rep.associativity_failures.append((i + 1, j + 1, k + 1))
    for i in range(n):
        e = {i: 1}
        if clean(A.mul(A.unit, e)) != e or clean(A.mul(e, A.unit)) != e:
            rep.unit_failures.append(i + 1)
    return rep


def change_basis(A: FDAlgebra, new_basis: Sequence[dict], labels=None) -> FDAlgebra:
    """Same algebra written in another basis (vectors given in the old basis)."""
    return change_basis_with_map(A, new_basis, labels)[0]


def change_basis_with_map(A: FDAlgebra, new_basis: Sequence[dict], labels=None):
    n = A.dim
    P = [[0] * n for _ in range(n)]          # column t = coordinates of new_basis[t]
    for t, v in enumerate(new_basis):
        for k, c in v.items():
            P[k][t] = c
    Pinv = inverse_dense(P)

    def convert(x: dict) -> dict:
        out: dict = {}
        for k, c in x.items():
            for t in range(n):
                if Pinv[t][k]:
                    add_into(out, t, Pinv[t][k] * c)
        return clean(out)

    table = [[convert(A.mul(a, b)) for b in new_basis] for a in new_basis]
    idem = None if A.idempotents is None else tuple(convert(e) for e in A.idempotents)
    B = FDAlgebra.from_table(labels or [f"f{t}" for t in range(n)], table,
                             convert(A.unit), A.name, idem)
    return B, convert


# -- matrices over algebras ----------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgMatrix:
    """Dense rows x cols grid of algebra elements (sparse vectors)."""

    algebra: object
    entries: tuple

    @classmethod
    def from_rows(cls, algebra, rows) -> "AlgMatrix":
        norm = tuple(tuple(algebra.normalize(dict(x)) for x in row) for row in rows)
        widths = {len(r) for r in norm}
        if len(widths) > 1:
            raise DimensionMismatch("ragged matrix")
        return cls(algebra, norm)

    @classmethod
    def identity(cls, algebra, n: int) -> "AlgMatrix":
        return cls.from_rows(algebra, [[algebra.one() if i == j else {} for j in range(n)]
                                       for i in range(n)])

    @classmethod
    def scalar_matrix(cls, algebra, rows) -> "AlgMatrix":
        """Constant matrix: scalar entries times the unit."""
        one = algebra.one()
        return cls.from_rows(algebra, [[scale(one, as_scalar(c)) for c in r] for r in rows])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "AlgMatrix") -> "AlgMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        A = self.algebra
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc: dict = {}
                for l in range(self.cols):
                    x, y = self.entries[i][l], other.entries[l][j]
                    if x and y:
                        axpy(acc, 1, A.mul(x, y))
                row.append(acc)
            out.append(row)
        return AlgMatrix.from_rows(A, out)

    def _zip(self, other, c):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return AlgMatrix.from_rows(self.algebra, [
            [axpy(dict(self.entries[i][j]), c, other.entries[i][j]) for j in range(self.cols)]
            for i in range(self.rows)])

    def __add__(self, other):
        return self._zip(other, 1)

    def __sub__(self, other):
        return self._zip(other, -1)

    def scaled(self, c) -> "AlgMatrix":
        c = as_scalar(c)
        return AlgMatrix.from_rows(self.algebra, [[scale(x, c) for x in r] for r in self.entries])

    def __eq__(self, other):
        if not isinstance(other, AlgMatrix) or self.shape != other.shape:
            return False
        return all(clean(self.entries[i][j]) == clean(other.entries[i][j])
                   for i in range(self.rows) for j in range(self.cols))

    __hash__ = None

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == AlgMatrix.identity(self.algebra, self.rows)

    def block_sum(self, other: "AlgMatrix") -> "AlgMatrix":
        n, m = self.rows, other.rows
        p, q = self.cols, other.cols
        rows = [list(r) + [{}] * q for r in self.entries]
        rows += [[{}] * p + list(r) for r in other.entries]
        return AlgMatrix.from_rows(self.algebra, rows)

    def map_entries(self, f, algebra=None) -> "AlgMatrix":
        alg = algebra or self.algebra
        return AlgMatrix.from_rows(alg, [[f(x) for x in r] for r in self.entries])

    def trace(self) -> dict:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of a non-square matrix")
        acc: dict = {}
        for i in range(self.rows):
            axpy(acc, 1, self.entries[i][i])
        return acc

    def __repr__(self):
        return f"AlgMatrix({self.rows}x{self.cols} over {self.algebra!r})"


def is_idempotent(e: AlgMatrix) -> bool:
    if e.rows != e.cols:
        raise DimensionMismatch("idempotent test needs a square matrix")
    return (e @ e) == e


def invert(g: AlgMatrix, candidate: AlgMatrix | None = None) -> AlgMatrix:
    """Two-sided inverse of a square matrix over an algebra.

    Over an FDAlgebra the inverse is found by solving g h = 1 on the
    regular representation.  Over a presented algebra, a candidate is
    verified, or one is produced for diagonal matrices of invertible
    monomials; otherwise :class:`Unverifiable` is raised.
    """
    if g.rows != g.cols:
        raise DimensionMismatch("only square matrices are invertible")
    A = g.algebra
    n = g.rows
    if candidate is not None:
        if (g @ candidate).is_identity() and (candidate @ g).is_identity():
            return candidate
        raise NotInvertible("supplied candidate is not a two-sided inverse")
    if isinstance(A, FDAlgebra):
        d = A.dim
        # unknown h[l][j] coordinate k  <->  column index (l, j, k)
        keys = [(l, j, k) for l in range(n) for j in range(n) for k in range(d)]
        cols = []
        for (l, j, k) in keys:
            col: dict = {}
            for i in range(n):
                gil = g.entries[i][l]
                if gil:
                    for t, c in A.mul(gil, {k: 1}).items():
                        add_into(col, (i, j, t), c)
            cols.append(col)
        target: dict = {}
        for i in range(n):
            for t, c in A.unit.items():
                target[(i, i, t)] = c
        x = solve(cols, target)
        if x is None:
            raise NotInvertible("matrix is not invertible over the algebra")
        h = [[{} for _ in range(n)] for _ in range(n)]
        for idx, c in x.items():
            l, j, k = keys[idx]
            add_into(h[l][j], k, c)
        H = AlgMatrix.from_rows(A, h)
        if not (H @ g).is_identity():
            raise NotInvertible("right inverse is not a left inverse")
        return H
    inv_entry = getattr(A, "invert_element", None)
    if inv_entry is None:
        raise Unverifiable("no inverse candidate available")
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            x = g.entries[i][j]
            if i != j:
                if x:
                    raise Unverifiable("presented algebra: supply a candidate inverse")
                row.append({})
            else:
                row.append(inv_entry(x))
        rows.append(row)
    H = AlgMatrix.from_rows(A, rows)
    if not ((g @ H).is_identity() and (H @ g).is_identity()):
        raise NotInvertible("computed inverse failed verification")
    return H


# -- small standard algebras ----------------------------------------------

def complex_numbers() -> FDAlgebra:
    return FDAlgebra.from_table(["1"], [[{0: 1}]], {0: 1}, "C")


def direct_power(k: int) -> FDAlgebra:
    """C^k = functions on k points, indicator basis adapted so the unit is first."""
    table = [[({i: 1} if i == j else {}) for j in range(k)] for i in range(k)]
    unit = {i: 1 for i in range(k)}
    idem = [{i: 1} for i in range(k)]
    A = FDAlgebra.from_table([f"p{i}" for i in range(k)], table, unit, f"C^{k}", idem)
    return A.unit_first()


def truncated_polynomial(m: int, var: str = "x") -> FDAlgebra:
    """C[x]/(x^m) with basis 1, x, ..., x^(m-1)."""
    table = [[({i + j: 1} if i + j < m else {}) for j in range(m)] for i in range(m)]
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, m)]
    return FDAlgebra.from_table(labels, table, {0: 1}, f"C[{var}]/({var}^{m})")


def matrix_units(n: int) -> FDAlgebra:
    """M_n(C), adapted basis: unit, then matrix units minus E_nn."""
    idx = [(i, j) for i in range(n) for j in range(n)]
    pos = {ij: t for t, ij in enumerate(idx)}
    table = [[({pos[(a[0], b[1])]: 1} if a[1] == b[0] else {}) for b in idx] for a in idx]
    unit = {pos[(i, i)]: 1 for i in range(n)}
    idem = [{pos[(i, i)]: 1} for i in range(n)]
    A = FDAlgebra.from_table([f"E{i+1}{j+1}" for i, j in idx], table, unit, f"M{n}(C)", idem)
    return A.unit_first()
