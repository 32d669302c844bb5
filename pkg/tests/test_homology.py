import random

import pytest

from cyclochern.algebra import (FDAlgebra, change_basis, complex_numbers, direct_power,
                                matrix_units, truncated_polynomial)
from cyclochern.homology import (chain_model, class_rank, commutator_quotient_dim,
                                 hochschild_dims, homology_report, hp_dims)
from cyclochern.forms import omega_basis
from cyclochern.linalg import exact_rank
from cyclochern.morita import cyclic_group, direct_sum, group_algebra, matrix_algebra, \
    symmetric_group
from oracles import normalized_hochschild_dims, semisimple_hp


def test_exact_rank_examples():
    assert exact_rank([{0: 1}, {1: 1}, {2: 1}]) == 3
    assert exact_rank([{}, {}]) == 0
    assert exact_rank([{0: 1, 1: 2}, {0: 2, 1: 4}]) == 1


ORACLE_CASES = [complex_numbers(), direct_power(2), direct_power(3), matrix_units(2),
                truncated_polynomial(2), truncated_polynomial(3),
                group_algebra(cyclic_group(3))]


@pytest.mark.parametrize("A", ORACLE_CASES, ids=lambda A: A.name)
@pytest.mark.parametrize("reduce", [True, False])
def test_hochschild_matches_bar_complex(A, reduce):
    N = 3 if A.dim == 4 else 4
    assert hochschild_dims(A, N, reduce) == normalized_hochschild_dims(A.table, 0, N)


def test_hochschild_headline_values():
    assert hochschild_dims(complex_numbers(), 4) == [1, 0, 0, 0, 0]
    assert hochschild_dims(direct_power(2), 4) == [2, 0, 0, 0, 0]
    assert hochschild_dims(truncated_polynomial(2), 4) == [2, 1, 1, 1, 1]


@pytest.mark.parametrize("A", ORACLE_CASES + [group_algebra(symmetric_group(3))],
                         ids=lambda A: A.name)
def test_degree_zero_is_commutator_quotient(A):
    assert hochschild_dims(A, 0)[0] == commutator_quotient_dim(A)


@pytest.mark.parametrize("A", ORACLE_CASES + [group_algebra(cyclic_group(4)),
                                              group_algebra(symmetric_group(3))],
                         ids=lambda A: A.name)
def test_hp_matches_semisimple_quotient_oracle(A):
    rep = hp_dims(A, 4)
    assert (rep.even, rep.odd) == semisimple_hp(A.table)
    assert rep.stabilized


def test_hp_truncated_polynomial_stabilizes_by_eight():
    rep = hp_dims(truncated_polynomial(2), 8)
    assert (rep.even, rep.odd, rep.stabilized) == (1, 0, True)


def test_hp_small_truncation_not_claimed_stable():
    rep = hp_dims(direct_power(2), 2)
    assert rep.even == 2
    assert rep.stabilized is False        # fewer than three truncations examined


def test_hp_needs_truncation_two():
    with pytest.raises(ValueError):
        hp_dims(complex_numbers(), 1)


def test_relative_and_absolute_hp_agree():
    for A, N in [(truncated_polynomial(2), 4), (group_algebra(cyclic_group(2)), 3),
                 (matrix_units(2), 2)]:
        assert tuple(hp_dims(A, N, reduce=True))[:2] == tuple(hp_dims(A, N, reduce=False))[:2]


def _random_basis(A, rng):
    n = A.dim
    while True:
        new = [{j: rng.randint(-2, 2) for j in range(n)} for _ in range(n)]
        new[0] = {0: 1, 1: rng.randint(-2, 2)}
        if exact_rank(new) == n:
            return change_basis(A, new).unit_first()


def test_dims_invariant_under_basis_change():
    rng = random.Random(3)
    A = truncated_polynomial(2)
    B = _random_basis(A, rng)
    assert tuple(hp_dims(B, 4))[:2] == tuple(hp_dims(A, 4))[:2] == (1, 0)
    A = truncated_polynomial(3)
    B = _random_basis(A, rng)
    assert hochschild_dims(B, 3) == hochschild_dims(A, 3)


def test_block_additivity():
    A, B = direct_power(2), truncated_polynomial(2)
    S, _ = direct_sum([A, B])
    assert hochschild_dims(S, 3) == [a + b for a, b in zip(hochschild_dims(A, 3),
                                                           hochschild_dims(B, 3))]
    hs, ha, hb = hp_dims(S, 4), hp_dims(A, 4), hp_dims(B, 4)
    assert (hs.even, hs.odd) == (ha.even + hb.even, ha.odd + hb.odd)


def test_report_invariants():
    A = truncated_polynomial(3)
    rep = homology_report(A, 4, 4)
    M = chain_model(A)
    for n in range(5):
        rb_in = rep.b_ranks.get(n, 0)
        rb_out = rep.b_ranks[n + 1]
        assert rep.hh_dims[n] == rep.chain_dims[n] - rb_in - rb_out >= 0
        assert rb_in + rb_out <= M.dim(n)
    assert rep.hp_dims == (1, 0) and rep.stabilized


def test_class_rank_of_unit():
    A = matrix_units(2)
    assert class_rank(A, [{(0,): 1}], 3) == 1
    assert class_rank(A, [{(0,): 1}, {(0,): 2}], 3) == 1


def test_morita_dims_small():
    for A in [complex_numbers(), direct_power(2)]:
        M, _ = matrix_algebra(A, 2)
        assert tuple(hp_dims(M, 3))[:2] == tuple(hp_dims(A, 3))[:2]


def test_unit_not_basis_vector():
    tbl = [[{0: 1}, {}], [{}, {1: 1}]]
    A = FDAlgebra.from_table(["p0", "p1"], tbl, {0: 1, 1: 1})
    with pytest.raises(ValueError, match="unit"):
        omega_basis(A, 1)
    # homology adapts the basis itself, so the answer is that of C^2
    assert hochschild_dims(A, 2, reduce=False) == [2, 0, 0]
