"""Deterministic generators of idempotent and invertible matrices over small algebras."""

import random
from fractions import Fraction

from cyclochern.algebra import AlgMatrix, invert, is_idempotent


def rand_element(A, rng, k=2, density=0.7):
    return {i: Fraction(rng.randint(-k, k), rng.randint(1, 2))
            for i in range(A.dim) if rng.random() < density}


def unipotent(A, n, rng):
    """Upper times lower unitriangular n x n matrix: always invertible."""
    one = A.one()
    U = [[one if i == j else (rand_element(A, rng) if i < j else {}) for j in range(n)]
         for i in range(n)]
    L = [[one if i == j else (rand_element(A, rng) if i > j else {}) for j in range(n)]
         for i in range(n)]
    return AlgMatrix.from_rows(A, U) @ AlgMatrix.from_rows(A, L)


def scalar_diag(A, n, rng):
    vals = [Fraction(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 2, 3])) for _ in range(n)]
    return AlgMatrix.scalar_matrix(A, [[vals[i] if i == j else 0 for j in range(n)]
                                       for i in range(n)])


def invertibles(A, count, seed=0, sizes=(1, 2)):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice(sizes)
        g = unipotent(A, n, rng) @ scalar_diag(A, n, rng)
        if rng.random() < 0.5:
            g = g @ unipotent(A, n, rng)
        out.append(g)
    return out


def base_idempotents(A):
    """Idempotent elements of A known from its structure (the idempotent hint or the unit)."""
    es = [A.one()]
    if A.idempotents:
        es += [dict(e) for e in A.idempotents]
        if len(A.idempotents) > 2:
            es.append({k: v for e in A.idempotents[:2] for k, v in e.items()})
    for k in range(A.dim):
        v = {k: 1}
        if A.mul(v, v) == v:
            es.append(v)
    return es


def idempotents(A, count, seed=0, sizes=(1, 2)):
    """Conjugates g e0 g^-1 of block-diagonal idempotents built from base ones."""
    rng = random.Random(seed)
    bases = base_idempotents(A)
    out = []
    while len(out) < count:
        n = rng.choice(sizes)
        diag = [rng.choice(bases + [{}]) for _ in range(n)]
        e0 = AlgMatrix.from_rows(A, [[diag[i] if i == j else {} for j in range(n)]
                                     for i in range(n)])
        g = unipotent(A, n, rng)
        e = g @ e0 @ invert(g)
        assert is_idempotent(e)
        out.append(e)
    return out
