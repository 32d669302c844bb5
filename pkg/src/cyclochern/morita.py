"""Finite toy models: group algebras, functions on finite sets, finite group
actions and their invariant subalgebras, matrix algebras, direct sums and
the block model built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .algebra import AlgMatrix, FDAlgebra, is_idempotent
from .chern import ch_cq_even
from .homology import class_rank, fixed_rank, hp_dims
from .linalg import exact_rank, nullspace, solve
from .sparse import add_into, axpy, clean

__all__ = [
    "GroupTable", "InvalidGroup", "cyclic_group", "symmetric_group", "trivial_group",
    "group_from_permutations", "group_algebra", "function_algebra", "indicator",
    "GroupAction", "permutation_action", "invariant_subalgebra", "matrix_algebra",
    "direct_sum", "wassermann_toy_check", "WassermannReport", "LeviBlock", "LeviModel",
    "levi_block_model", "orbits",
]


class InvalidGroup(ValueError):
    pass


@dataclass(frozen=True)
class GroupTable:
    table: tuple            # table[g][h] = index of g*h
    identity: int = 0
    labels: tuple = ()

    @property
    def order(self) -> int:
        return len(self.table)

    def inverse(self, g: int) -> int:
        for h in range(self.order):
            if self.table[g][h] == self.identity:
                return h
        raise InvalidGroup(f"element {g} has no inverse")

    def validate(self) -> None:
        n = self.order
        if any(len(r) != n for r in self.table):
            raise InvalidGroup("table is not square")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise InvalidGroup("table entry out of range")
        e = self.identity
        for g in range(n):
            if self.table[e][g] != g or self.table[g][e] != g:
                raise InvalidGroup("identity law fails")
            self.inverse(g)
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise InvalidGroup(f"associativity fails at {(a, b, c)}")


def group_from_permutations(perms: Sequence[tuple], labels=None) -> GroupTable:
    """Group table of a list of permutations closed under composition (first = identity)."""
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = tuple(tuple(index[tuple(p[x] for x in q)] for q in perms) for p in perms)
    G = GroupTable(table, 0, tuple(labels or [str(p) for p in perms]))
    G.validate()
    return G


def cyclic_group(n: int) -> GroupTable:
    return GroupTable(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0,
                      tuple(f"g^{i}" for i in range(n)))


def trivial_group() -> GroupTable:
    return cyclic_group(1)


def symmetric_group(k: int) -> GroupTable:
    perms = sorted(permutations(range(k)))
    return group_from_permutations(perms)


def group_algebra(G: GroupTable) -> FDAlgebra:
    """C[G] with the group elements as basis, identity first."""
    G.validate()
    order = [G.identity] + [g for g in range(G.order) if g != G.identity]
    pos = {g: i for i, g in enumerate(order)}
    table = [[{pos[G.table[a][b]]: 1} for b in order] for a in order]
    labels = [G.labels[g] if G.labels else f"g{g}" for g in order]
    return FDAlgebra.from_table(labels, table, {0: 1}, f"C[G{G.order}]")


def function_algebra(n: int, labels: Sequence[str] | None = None) -> FDAlgebra:
    """C(X) for |X| = n; basis 1, p_1, ..., p_{n-1} (p_x = indicator of x)."""
    if n < 1:
        raise ValueError("need a nonempty set")
    labels = list(labels or [str(x) for x in range(n)])
    table = [[({i: 1} if i == j else {}) for j in range(n)] for i in range(n)]
    A = FDAlgebra.from_table([f"p{x}" for x in labels], table, {i: 1 for i in range(n)},
                             f"C(X{n})", [{i: 1} for i in range(n)])
    return A.unit_first()


def indicator(n: int, x: int) -> dict:
    """Coordinates of p_x in the basis of function_algebra(n)."""
    if x == 0:
        return {0: 1, **{k: -1 for k in range(1, n)}}
    return {x: 1}


def evaluate(n: int, v: dict, x: int):
    """Value at the point x of an element of function_algebra(n)."""
    return v.get(0, 0) + (v.get(x, 0) if x else 0)


def orbits(perms: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    seen, out = set(), []
    for x in range(n):
        if x in seen:
            continue
        orb = sorted({p[x] for p in perms})
        seen.update(orb)
        out.append(orb)
    return out


@dataclass
class GroupAction:
    """A finite group acting on an FDAlgebra; ``matrices[g]`` lists images of basis vectors."""

    group: GroupTable
    algebra: FDAlgebra
    matrices: list
    perms: list | None = None          # set when the action permutes points of X

    def apply(self, g: int, v: dict) -> dict:
        out: dict = {}
        cols = self.matrices[g]
        for k, c in v.items():
            axpy(out, c, cols[k])
        return clean(out)

    def automorphism(self, g: int):
        return lambda v: self.apply(g, v)

    def validate(self) -> None:
        A, G = self.algebra, self.group
        for g in range(G.order):
            if self.apply(g, A.one()) != clean(A.unit):
                raise ValueError(f"element {g} does not fix the unit")
            for i in range(A.dim):
                for j in range(A.dim):
                    lhs = self.apply(g, A.table[i][j])
                    rhs = clean(A.mul(self.matrices[g][i], self.matrices[g][j]))
                    if lhs != rhs:
                        raise ValueError(f"element {g} is not multiplicative")
        for g in range(G.order):
            for h in range(G.order):
                gh = G.table[g][h]
                for k in range(A.dim):
                    if self.apply(g, self.matrices[h][k]) != clean(self.matrices[gh][k]):
                        raise ValueError("action does not respect the group law")


def permutation_action(G: GroupTable, n: int, perms: Sequence[Sequence[int]]) -> GroupAction:
    """G acting on C(X), |X| = n, with element g sending the point x to perms[g][x]."""
    A = function_algebra(n)
    mats = []
    for p in perms:
        cols = [dict(A.unit)]
        for k in range(1, n):
            cols.append(indicator(n, p[k]))
        mats.append(cols)
    act = GroupAction(G, A, mats, [list(p) for p in perms])
    act.validate()
    return act


def invariant_subalgebra(act: GroupAction):
    """(A^G, inclusion) where inclusion maps A^G coordinates to A coordinates."""
    A = act.algebra
    cols = []
    for k in range(A.dim):
        col: dict = {}
        for g in range(act.group.order):
            for t, c in act.matrices[g][k].items():
                add_into(col, (g, t), c)
            add_into(col, (g, k), -1)
        cols.append(col)
    fixed = nullspace(cols)
    if exact_rank(fixed + [A.unit]) != len(fixed):
        raise AssertionError("unit is not invariant")
    basis = [clean(A.unit)]
    for v in fixed:
        if exact_rank(basis + [v]) > len(basis):
            basis.append(v)
    m = len(basis)
    table = []
    for a in basis:
        row = []
        for b in basis:
            x = solve(basis, clean(A.mul(a, b)))
            if x is None:
                raise AssertionError("fixed subspace is not closed under the product")
            row.append(x)
        table.append(row)
    B = FDAlgebra.from_table([f"f{t}" for t in range(m)], table, {0: 1}, f"{A.name}^G")

    def inclusion(v: dict) -> dict:
        out: dict = {}
        for t, c in v.items():
            axpy(out, c, basis[t])
        return clean(out)

    B._cache["inclusion_basis"] = basis
    return B, inclusion


def matrix_algebra(A: FDAlgebra, n: int):
    """(M_n(A), corner inclusion a -> a (+) 0)."""
    if n < 1:
        raise ValueError("n >= 1")
    if n == 1:
        return A, dict
    d = A.dim
    keys = [(i, j, k) for i in range(n) for j in range(n) for k in range(d)]
    pos = {key: t for t, key in enumerate(keys)}
    table = []
    for (i, j, k) in keys:
        row = []
        for (a, b, l) in keys:
            if j != a:
                row.append({})
            else:
                row.append({pos[(i, b, m)]: c for m, c in A.table[k][l].items()})
        table.append(row)
    unit = {pos[(i, i, k)]: c for i in range(n) for k, c in A.unit.items()}
    sub = list(A.idempotents) if A.idempotents else [A.one()]
    idem = [{pos[(i, i, k)]: c for k, c in e.items()} for i in range(n) for e in sub]
    labels = [f"E{i+1}{j+1}*{A.labels[k]}" for (i, j, k) in keys]
    B0 = FDAlgebra.from_table(labels, table, unit, f"M{n}({A.name})", idem)
    B, conv = B0.unit_first_with_map()

    def corner(v: dict) -> dict:
        return conv({pos[(0, 0, k)]: c for k, c in v.items()})

    B._cache["entry_map"] = (pos, conv)
    return B, corner


def direct_sum(algs: Sequence[FDAlgebra]):
    """(A_1 + ... + A_r, [inclusion_1, ..., inclusion_r])."""
    if not algs:
        raise ValueError("empty direct sum")
    offs, total = [], 0
    for A in algs:
        offs.append(total)
        total += A.dim
    table = [[{} for _ in range(total)] for _ in range(total)]
    unit: dict = {}
    idem = []
    labels = []
    for A, o in zip(algs, offs):
        for i in range(A.dim):
            labels.append(f"{A.labels[i]}@{A.name}")
            for j in range(A.dim):
                table[o + i][o + j] = {o + k: c for k, c in A.table[i][j].items()}
        for k, c in A.unit.items():
            unit[o + k] = c
        sub = list(A.idempotents) if A.idempotents else [A.one()]
        idem += [{o + k: c for k, c in e.items()} for e in sub]
    name = " + ".join(A.name for A in algs)
    B0 = FDAlgebra.from_table(labels, table, unit, name, idem)
    B, conv = B0.unit_first_with_map()
    incs = [(lambda v, o=o: conv({o + k: c for k, c in v.items()})) for o in offs]
    return B, incs


# -- Wassermann-type check ---------------------------------------------------

@dataclass
class WassermannReport:
    hp0_invariants: int
    orbit_count: int
    fixed_in_hp0: int
    hp_report: object = None

    @property
    def ok(self) -> bool:
        return self.hp0_invariants == self.orbit_count == self.fixed_in_hp0


def wassermann_toy_check(act: GroupAction, N: int = 3) -> WassermannReport:
    """dim HP_0(A^W) = |X/W| = dim HP_0(A)^W for a permutation action on C(X)."""
    if act.perms is None:
        raise ValueError("action must permute the points of X")
    B, _ = invariant_subalgebra(act)
    hp_inv = hp_dims(B, max(N, 4))
    n = act.algebra.dim
    orb = len(orbits(act.perms, n))
    autos = [act.automorphism(g) for g in range(act.group.order)]
    fixed = fixed_rank(act.algebra, autos, N, parity=0)
    return WassermannReport(hp_inv.even, orb, fixed, hp_inv)


# -- Levi block model ------------------------------------------------------------

@dataclass
class LeviBlock:
    points: int
    perms: list                  # one permutation of range(points) per group element
    size: int
    group: GroupTable | None = None

    def action(self) -> GroupAction:
        G = self.group or group_from_permutations(self.perms)
        return permutation_action(G, self.points, self.perms)


@dataclass
class LeviModel:
    algebra: FDAlgebra
    blocks: list
    traces: list = field(default_factory=list)           # linear functionals {basis: value}
    minimal_idempotents: list = field(default_factory=list)
    orbit_total: int = 0

    def idempotent_matrix(self, k: int) -> AlgMatrix:
        return AlgMatrix.from_rows(self.algebra, [[self.minimal_idempotents[k]]])

    def pairing_matrix(self, alternating_sign=None) -> list[list]:
        """traces[i] evaluated on the degree-0 part of ch_CQ(minimal idempotent j)."""
        out = []
        ch0 = []
        for k in range(len(self.minimal_idempotents)):
            c = ch_cq_even(self.idempotent_matrix(k), 0, alternating_sign)
            ch0.append({t[0]: v for t, v in c.component(0).items()})
        for tau in self.traces:
            out.append([sum((tau.get(b, 0) * v for b, v in x.items()), 0) for x in ch0])
        return out

    def ch_class_rank(self, N: int = 3, alternating_sign=None) -> int:
        chains = []
        for k in range(len(self.minimal_idempotents)):
            c = ch_cq_even(self.idempotent_matrix(k), N, alternating_sign)
            chains.append(c.flat())
        return class_rank(self.algebra, chains, N)


def levi_block_model(blocks: Sequence[LeviBlock]) -> LeviModel:
    """Direct sum over blocks of M_n(C(X)^W), with point-evaluation traces."""
    if not blocks:
        raise ValueError("levi_block_model needs at least one block")
    algs, data = [], []
    for blk in blocks:
        act = blk.action()
        inv, incl = invariant_subalgebra(act)
        M, corner = matrix_algebra(inv, blk.size)
        algs.append(M)
        data.append((blk, inv, incl, M, corner))
    total, incs = direct_sum(algs)

    # every matrix entry E_ij * f_k of every block, as a vector of `total`
    entries = []
    for b, ((blk, inv, incl, M, corner), inc) in enumerate(zip(data, incs)):
        for i in range(blk.size):
            for j in range(blk.size):
                for k in range(inv.dim):
                    entries.append((inc(_entry(M, blk.size, i, j, k)), b, i, j, k))
    vecs = [e[0] for e in entries]
    dual = [solve(vecs, {t: 1}) for t in range(total.dim)]

    traces, idems, orbit_total = [], [], 0
    for b, ((blk, inv, incl, M, corner), inc) in enumerate(zip(data, incs)):
        orbs = orbits(blk.perms, blk.points)
        orbit_total += len(orbs)
        for orb in orbs:
            x = orb[0]
            vals = [evaluate(blk.points, incl({k: 1}), x) if (bb == b and i == j) else 0
                    for _, bb, i, j, k in entries]
            tau = {}
            for t, sol in enumerate(dual):
                v = sum((c * vals[j] for j, c in sol.items()), 0)
                if v:
                    tau[t] = v
            traces.append(tau)
            chi: dict = {}
            for y in orb:
                axpy(chi, 1, indicator(blk.points, y))
            coeffs = solve(inv._cache["inclusion_basis"], clean(chi))
            idems.append(inc(corner(coeffs)))
    for e in idems:
        assert is_idempotent(AlgMatrix.from_rows(total, [[e]]))
    return LeviModel(total, list(blocks), traces, idems, orbit_total)


def _entry(M: FDAlgebra, size: int, i: int, j: int, k: int) -> dict:
    if size == 1:
        return {k: 1}
    pos, conv = M._cache["entry_map"]
    return conv({pos[(i, j, k)]: 1})
