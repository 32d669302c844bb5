"""Hochschild and periodic cyclic homology dimensions of finite-dimensional algebras.

Homology is computed on the normalized mixed complex.  When the algebra
carries a complete system of orthogonal idempotents e_1..e_r (recorded as
a hint and refined by the Q(i)-rational central idempotents), the complex
is taken relative to the separable subalgebra S = span(e_i): chains are
cyclic tensor products over S of Peirce blocks e_i A e_j, with the slots
after the first taken modulo S.  The projection from the absolute complex
is a morphism of mixed complexes and a quasi-isomorphism for b, so HH and
HP are unchanged while the chain spaces shrink drastically for matrix and
semisimple algebras.

HP uses the Cuntz-Quillen tower T_p = Omega / (b Omega^{p+1} + prod_{n>p}
Omega^n): the reported dimension is the rank of the map induced on
homology by T_{2N+1} -> T_{2N-3}, and it is called stabilized when three
consecutive truncations agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .algebra import FDAlgebra, change_basis_with_map
from .linalg import exact_rank, nullspace, solve
from .scalars import as_scalar
from .sparse import add_into, axpy, clean

__all__ = ["exact_rank", "ChainModel", "chain_model", "hochschild_dims", "hp_dims",
           "HomologyReport", "HPReport", "central_idempotents", "idempotent_system",
           "center_basis", "commutator_quotient_dim", "homology_report",
           "class_rank", "fixed_rank"]


# -- idempotents -------------------------------------------------------------

def center_basis(A: FDAlgebra) -> list[dict]:
    cols = []
    for j in range(A.dim):
        col: dict = {}
        for k in range(A.dim):
            for t, c in A.table[j][k].items():
                add_into(col, (k, t), c)
            for t, c in A.table[k][j].items():
                add_into(col, (k, t), -c)
        cols.append(col)
    return nullspace(cols)


def _powers_minpoly(A: FDAlgebra, z: dict, unit: dict | None = None) -> list:
    """Coefficients c_0..c_m (c_m = 1) of the minimal polynomial of z (in the corner of ``unit``)."""
    pows = [clean(unit) if unit is not None else A.one()]
    while True:
        nxt = A.mul(pows[-1], z)
        x = solve(pows, nxt)
        if x is not None:
            m = len(pows)
            return [-x.get(k, 0) for k in range(m)] + [1]
        pows.append(nxt)


def _eval_poly(A: FDAlgebra, coeffs: list, z: dict, unit: dict | None = None) -> dict:
    one = unit if unit is not None else A.one()
    out: dict = {}
    for c in reversed(coeffs):
        out = A.mul(out, z)
        axpy(out, c, one)
    return clean(out)


def _spectral_idempotents(A: FDAlgebra, z: dict, unit: dict | None = None) -> list[dict]:
    """Idempotents of Q(i)[z] from the factorization of the minimal polynomial of z."""
    import sympy
    x = sympy.Symbol("x")
    coeffs = _powers_minpoly(A, z, unit)
    m = sympy.Poly([_to_sympy(c) for c in reversed(coeffs)], x, domain="QQ_I")
    _, factors = sympy.factor_list(m.as_expr(), x, gaussian=True)
    if len(factors) <= 1:
        return []
    found = []
    for p, k in factors:
        pk = sympy.Poly(p ** k, x, domain="QQ_I")
        q = sympy.Poly(sympy.quo(m, pk), x, domain="QQ_I")
        s, _, _ = sympy.gcdex(q, pk)
        f = sympy.Poly(q * s, x, domain="QQ_I").rem(m)
        cs = [as_scalar(sympy.nsimplify(c)) for c in reversed(f.all_coeffs())]
        found.append(_eval_poly(A, cs, z, unit))
    return found


def central_idempotents(A: FDAlgebra, rounds: int = 3, seed: int = 0) -> list[dict]:
    """Q(i)-rational primitive central idempotents (via factoring minimal polynomials)."""
    import sympy
    Z = center_basis(A)
    if len(Z) <= 1:
        return [A.one()]
    rng = random.Random(seed)
    idems = [A.one()]
    for _ in range(rounds):
        z: dict = {}
        for v in Z:
            axpy(z, rng.randint(-7, 7) or 1, v)
        found = _spectral_idempotents(A, z)
        if found:
            idems = _refine(A, idems, found)
    return idems


def split_corner(A: FDAlgebra, e: dict, max_rounds: int = 8) -> list[dict]:
    """Orthogonal idempotents summing to e, splitting eAe as far as Q(i) allows cheaply.

    Candidates are e b_k e for the basis vectors b_k; an element whose
    minimal polynomial factors splits the corner, and each piece is split
    again.  The result is not guaranteed primitive.
    """
    todo, done = [clean(e)], []
    rounds = 0
    while todo:
        f = todo.pop()
        pieces = []
        if rounds < max_rounds * A.dim:
            for k in range(A.dim):
                rounds += 1
                z = clean(A.mul(A.mul(f, {k: 1}), f))
                if not z or exact_rank([z, f]) < 2:
                    continue
                pieces = _spectral_idempotents(A, z, f)
                if pieces:
                    break
        if pieces:
            todo.extend(pieces)
        else:
            done.append(f)
    return done


def _to_sympy(c):
    import sympy
    from .scalars import imag_part, real_part
    return sympy.Rational(real_part(c).numerator, real_part(c).denominator) + \
        sympy.I * sympy.Rational(imag_part(c).numerator, imag_part(c).denominator)


def _refine(A: FDAlgebra, es: list[dict], fs: list[dict]) -> list[dict]:
    out = []
    for e in es:
        for f in fs:
            p = clean(A.mul(e, f))
            if p:
                out.append(p)
    return out


def _is_complete_system(A: FDAlgebra, es) -> bool:
    total: dict = {}
    for i, e in enumerate(es):
        for j, f in enumerate(es):
            p = clean(A.mul(e, f))
            if p != (clean(e) if i == j else {}):
                return False
        axpy(total, 1, e)
    return clean(total) == clean(A.unit)


def idempotent_system(A: FDAlgebra) -> list[dict]:
    """Hint idempotents (if valid) refined by the rational central idempotents."""
    key = ("idem_system",)
    if key in A._cache:
        return A._cache[key]
    base = [A.one()]
    if A.idempotents and _is_complete_system(A, A.idempotents):
        base = [clean(e) for e in A.idempotents]
    cent = central_idempotents(A)
    es = _refine(A, base, cent) if len(cent) > 1 else base
    if not _is_complete_system(A, es):
        es = base
    fine = [f for e in es for f in split_corner(A, e)]
    if _is_complete_system(A, fine):
        es = fine
    A._cache[key] = es
    return es


# -- chain models ------------------------------------------------------------

class ChainModel:
    """Normalized (possibly S-relative) mixed complex of a finite-dimensional algebra."""

    def __init__(self, A: FDAlgebra, idempotents: list[dict] | None = None):
        self.source = A
        if not idempotents or len(idempotents) == 1:
            self.relative = False
            self.alg, self.convert = A.unit_first_with_map()
            self.scalar_keys = {0}
            self.block = {k: (0, 0) for k in range(self.alg.dim)}
            self.idem_key = {0: 0}
        else:
            self.relative = True
            self._build_relative(A, idempotents)
        self.free_keys = [k for k in range(self.alg.dim) if k not in self.scalar_keys]
        if not self.relative:
            self.basis_vectors = [{k: 1} for k in range(self.alg.dim)]
        self._basis: dict = {}
        self._ops: dict = {}

    def _build_relative(self, A: FDAlgebra, es: list[dict]) -> None:
        vecs, blocks, idem_key = [], [], {}
        r = len(es)
        for i in range(r):
            for j in range(r):
                imgs = [clean(A.mul(A.mul(es[i], {k: 1}), es[j])) for k in range(A.dim)]
                chosen = []
                if i == j:
                    chosen.append(clean(es[i]))
                for v in imgs:
                    if v and exact_rank(chosen + [v]) > len(chosen):
                        chosen.append(v)
                if i == j:
                    idem_key[i] = len(vecs)
                vecs.extend(chosen)
                blocks.extend([(i, j)] * len(chosen))
        if len(vecs) != A.dim:
            raise ValueError("Peirce decomposition does not span the algebra")
        self.basis_vectors = vecs
        self.alg, self.convert = change_basis_with_map(
            A, vecs, labels=[f"b{t}" for t in range(len(vecs))])
        self.block = dict(enumerate(blocks))
        self.idem_key = idem_key
        self.scalar_keys = set(idem_key.values())

    # bases
    def basis(self, n: int) -> list[tuple]:
        hit = self._basis.get(n)
        if hit is not None:
            return hit
        if not self.relative:
            d = self.alg.dim
            out = [(i0,) + rest for i0 in range(d) for rest in product(range(1, d), repeat=n)]
        else:
            by_left: dict = {}
            for k in self.free_keys:
                by_left.setdefault(self.block[k][0], []).append(k)
            out = []
            for k0 in range(self.alg.dim):
                start, nxt = self.block[k0]
                paths = [((k0,), nxt)]
                for _ in range(n):
                    paths = [(p + (k,), self.block[k][1]) for p, cur in paths
                             for k in by_left.get(cur, ())]
                out.extend(p for p, end in paths if end == start)
        self._basis[n] = out
        return out

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    # operators on basis chains
    def b(self, t: tuple) -> dict:
        n = len(t) - 1
        out: dict = {}
        if n == 0:
            return out
        mul, S = self.alg.mul_basis, self.scalar_keys
        rest = t[2:]
        for m, c in mul(t[0], t[1]).items():
            add_into(out, (m,) + rest, c)
        for i in range(1, n):
            s = -1 if i % 2 else 1
            pre, post = t[:i], t[i + 2:]
            for m, c in mul(t[i], t[i + 1]).items():
                if m not in S:
                    add_into(out, pre + (m,) + post, s * c)
        s = -1 if n % 2 else 1
        mid = t[1:n]
        for m, c in mul(t[n], t[0]).items():
            add_into(out, (m,) + mid, s * c)
        return out

    def B(self, t: tuple) -> dict:
        if t[0] in self.scalar_keys:
            return {}
        n = len(t) - 1
        out: dict = {}
        for i in range(n + 1):
            rot = t[n + 1 - i:] + t[:n + 1 - i]
            e = self.idem_key[self.block[rot[0]][0]]
            add_into(out, (e,) + rot, -1 if (n * i) % 2 else 1)
        return out

    def expand(self, slots: list[dict]) -> dict:
        """Multilinear expansion of a0 da1 ... dan (slots in model coordinates)."""
        S = self.scalar_keys
        paths = [((), None, 1)]
        for pos, vec in enumerate(slots):
            nxt = []
            for path, end, c in paths:
                for k, ck in vec.items():
                    if pos and k in S:
                        continue
                    if end is not None and self.block[k][0] != end:
                        continue
                    nxt.append((path + (k,), self.block[k][1], c * ck))
            paths = nxt
        out: dict = {}
        for path, end, c in paths:
            if self.block[path[0]][0] == end:
                add_into(out, path, c)
        return out

    def project(self, vec: dict) -> dict:
        """Image of a chain over the basis of the source algebra (which must be unit-first)."""
        if not self.source.has_unit_first():
            raise ValueError("chains must live over a unit-first algebra")
        out: dict = {}
        for t, c in vec.items():
            slots = [self.convert({k: 1}) for k in t]
            axpy(out, c, self.expand(slots))
        return out

    def act(self, sigma, vec: dict) -> dict:
        """Apply the algebra automorphism ``sigma`` (source coordinates) slotwise to a model chain."""
        out: dict = {}
        for t, c in vec.items():
            slots = [self.convert(sigma(self.basis_vectors[k])) for k in t]
            axpy(out, c, self.expand(slots))
        return out

    def op(self, name: str, n: int) -> dict:
        key = (name, n)
        hit = self._ops.get(key)
        if hit is None:
            f = self.b if name == "b" else self.B
            hit = {t: f(t) for t in self.basis(n)}
            self._ops[key] = hit
        return hit

    def rank(self, name: str, n: int) -> int:
        key = ("rank", name, n)
        hit = self._ops.get(key)
        if hit is None:
            hit = exact_rank(self.op(name, n).values()) if n >= (1 if name == "b" else 0) else 0
            self._ops[key] = hit
        return hit


def chain_model(A: FDAlgebra, reduce: bool = True) -> ChainModel:
    key = ("chain_model", reduce)
    if key not in A._cache:
        es = idempotent_system(A) if reduce else None
        A._cache[key] = ChainModel(A, es)
    return A._cache[key]


# -- Hochschild --------------------------------------------------------------

def hochschild_dims(A: FDAlgebra, N: int, reduce: bool = True) -> list[int]:
    M = chain_model(A, reduce)
    out = []
    for n in range(N + 1):
        rb_n = M.rank("b", n) if n >= 1 else 0
        rb_next = M.rank("b", n + 1)
        out.append(M.dim(n) - rb_n - rb_next)
    return out


def commutator_quotient_dim(A: FDAlgebra) -> int:
    """dim A/[A, A], straight from the structure constants."""
    return A.dim - exact_rank(A.commutator_span())


# -- periodic cyclic homology -----------------------------------------------

def _tag(n: int, v: dict) -> dict:
    return {(n, t): c for t, c in v.items()}


class _Tower:
    """Truncated periodic complexes T_p with p = 2M + 1."""

    def __init__(self, model: ChainModel):
        self.M = model
        self._cache: dict = {}

    def boundary(self, x_deg: int, t: tuple, p: int) -> dict:
        """(B - b) of the basis chain t in degree x_deg, truncated above p."""
        out: dict = {}
        if x_deg + 1 <= p:
            axpy(out, 1, _tag(x_deg + 1, self.M.op("B", x_deg)[t]))
        if x_deg >= 1:
            axpy(out, -1, _tag(x_deg - 1, self.M.op("b", x_deg)[t]))
        return out

    def relations(self, p: int) -> list[dict]:
        """Spanning set of b(C_{p+1}) sitting in degree p."""
        return [_tag(p, v) for v in self.M.op("b", p + 1).values() if v]

    def space(self, parity: int, p: int) -> list:
        return [(n, t) for n in range(parity, p + 1, 2) for t in self.M.basis(n)]

    def cycles(self, parity: int, p: int) -> list[dict]:
        key = ("Z", parity, p)
        if key in self._cache:
            return self._cache[key]
        xs = self.space(parity, p)
        cols = [self.boundary(n, t, p) for n, t in xs]
        extra = []
        if p % 2 != parity:            # boundaries land in the quotient C_p / b C_{p+1}
            extra = [{k: -c for k, c in r.items()} for r in self.relations(p)]
        ker = nullspace(cols + extra)
        nx = len(xs)
        out = []
        for v in ker:
            x: dict = {}
            for j, c in v.items():
                if j < nx:
                    add_into(x, xs[j], c)
            if x:
                out.append(x)
        self._cache[key] = out
        return out

    def boundaries(self, parity: int, p: int) -> list[dict]:
        key = ("Bd", parity, p)
        if key in self._cache:
            return self._cache[key]
        out = [self.boundary(n, t, p) for n, t in self.space(1 - parity, p)]
        out = [v for v in out if v]
        if p % 2 == parity:
            out += self.relations(p)
        self._cache[key] = out
        return out

    def homology_dim(self, parity: int, p: int) -> int:
        z = exact_rank(self.cycles(parity, p))
        return z - exact_rank(self.boundaries(parity, p))

    def image_rank(self, parity: int, p: int, q: int) -> int:
        """Rank of H(T_p) -> H(T_q) for q < p."""
        proj = [{k: c for k, c in z.items() if k[0] <= q} for z in self.cycles(parity, p)]
        bd = self.boundaries(parity, q)
        return exact_rank(proj + bd) - exact_rank(bd)


def _split(vec: dict) -> dict:
    out: dict = {}
    for t, c in vec.items():
        add_into(out, (len(t) - 1, t), c)
    return out


def class_rank(A: FDAlgebra, chains: list[dict], N: int = 3, reduce: bool = True) -> int:
    """Dimension spanned by the classes of the given periodic cycles in HP.

    Each chain (a sparse vector over Omega(A) basis forms, all of one
    parity, degrees <= 2N) must be a cycle of T_{2N+1}; its image in
    H(T_{2N-3}) lies in the stable image, where the rank is read off.
    """
    model = chain_model(A, reduce)
    tower = _Tower(model)
    p, q = 2 * N + 1, 2 * N - 3
    vecs = [_split(model.project(v)) for v in chains]
    parities = {k[0] % 2 for v in vecs for k in v}
    if len(parities) > 1:
        raise ValueError("chains must share a parity")
    parity = parities.pop() if parities else 0
    rel = tower.relations(p) if p % 2 != parity else []
    for v in vecs:
        img: dict = {}
        for (n, t), c in v.items():
            axpy(img, c, tower.boundary(n, t, p))
        if img and solve(rel, img) is None:
            raise ValueError("chain is not a cycle of the truncated periodic complex")
    proj = [{k: c for k, c in v.items() if k[0] <= q} for v in vecs]
    bd = tower.boundaries(parity, q)
    return exact_rank(proj + bd) - exact_rank(bd)


def fixed_rank(A: FDAlgebra, automorphisms: list, N: int = 3, parity: int = 0,
               reduce: bool = True) -> int:
    """dim of the fixed subspace of HP_parity under a finite group of automorphisms.

    ``automorphisms`` lists the whole group as callables on source-coordinate
    vectors.  The averaging projector is applied to cycle representatives
    of T_{2N+1} and the rank of the result is read in H(T_{2N-3}).  The
    separable subalgebra used for reduction must be stable under the group.
    """
    from fractions import Fraction
    model = chain_model(A, reduce)
    if model.relative:
        S = model.scalar_keys
        for sg in automorphisms:
            for k in S:
                img = model.convert(sg(model.basis_vectors[k]))
                if any(j not in S for j in img):
                    model = chain_model(A, False)
                    break
    tower = _Tower(model)
    p, q = 2 * N + 1, 2 * N - 3
    w = Fraction(1, len(automorphisms))
    avg = []
    for z in tower.cycles(parity, p):
        acc: dict = {}
        for sg in automorphisms:
            by_deg: dict = {}
            for (n, t), c in z.items():
                by_deg.setdefault(n, {})[t] = c
            for n, v in by_deg.items():
                for t, c in model.act(sg, v).items():
                    add_into(acc, (n, t), w * c)
        avg.append({k: c for k, c in acc.items() if k[0] <= q})
    bd = tower.boundaries(parity, q)
    return exact_rank(avg + bd) - exact_rank(bd)


@dataclass
class HPReport:
    even: int
    odd: int
    stabilized: bool
    truncation: int
    history: dict = field(default_factory=dict)     # M -> (even rank, odd rank)

    def __iter__(self):
        return iter((self.even, self.odd, self.stabilized))


def hp_dims(A: FDAlgebra, N: int = 4, reduce: bool = True) -> HPReport:
    """Stable-image dimensions of HP_even, HP_odd using truncations N-2, N-1, N."""
    if N < 2:
        raise ValueError("hp_dims needs N >= 2")
    tower = _Tower(chain_model(A, reduce))
    history = {}
    for M in range(max(2, N - 2), N + 1):
        p, q = 2 * M + 1, 2 * (M - 2) + 1
        history[M] = (tower.image_rank(0, p, q), tower.image_rank(1, p, q))
    vals = list(history.values())
    stabilized = len(vals) == 3 and len(set(vals)) == 1
    ev, od = history[N]
    return HPReport(ev, od, stabilized, N, history)


@dataclass
class HomologyReport:
    hh_dims: list
    hp_dims: tuple
    truncation: int
    stabilized: bool
    b_ranks: dict
    chain_dims: dict
    relative: bool

    def __post_init__(self):
        for n, h in enumerate(self.hh_dims):
            assert h >= 0, f"negative Hochschild dimension in degree {n}"


def homology_report(A: FDAlgebra, hh_degree: int = 4, hp_truncation: int = 4,
                    reduce: bool = True) -> HomologyReport:
    M = chain_model(A, reduce)
    hh = hochschild_dims(A, hh_degree, reduce)
    hp = hp_dims(A, hp_truncation, reduce)
    return HomologyReport(hh, (hp.even, hp.odd), hp_truncation, hp.stabilized,
                          {n: M.rank("b", n) for n in range(1, hh_degree + 2)},
                          {n: M.dim(n) for n in range(hh_degree + 2)}, M.relative)


