import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from drazinkit import GF, QQ, ZZ, IntegerRing, Matrix, MatrixRing, ModularInt, TableRing, diag, drazin, identity, zeros
from drazinkit import calculus as calc
from drazinkit.calculus import IdempotentPair
from drazinkit.errors import (
    IdentityViolation,
    NonIdempotentInput,
    NotAProjector,
    NotStarReducing,
    PreconditionViolated,
    SixNotInvertible,
)
from drazinkit.generators import GenSpec, random_idempotent, special_pairs

M = Matrix.from_rows
Q2 = MatrixRing(QQ, 2)
half = Fraction(1, 2)


def qpair(p, q, domain=QQ):
    p, q = M(p, domain), M(q, domain)
    return IdempotentPair(p, q, MatrixRing(domain, p.rows))


def test_pair_rejects_non_idempotents():
    with pytest.raises(NonIdempotentInput):
        qpair([[2, 0], [0, 0]], [[1, 0], [0, 0]])


def test_fgh_examples(pair_a, diag_pair):
    e = random_idempotent(GenSpec(GF(7), 3), random.Random(1))
    t = calc.fgh(IdempotentPair(e, e))
    assert t.F.is_zero() and t.G.is_zero() and t.H.is_zero()
    t = calc.fgh(diag_pair)
    assert t.F == t.G == t.H == diag([0, 1, 0], QQ)
    t = calc.fgh(pair_a)
    assert t.F == pair_a.p
    assert t.G == M([[1, 0], [0, 0]], QQ)
    assert t.H == identity(2, QQ)
    calc.fgh_relations(pair_a, t)


def test_difference_derived_examples(pair_a, diag_pair):
    assert calc.derived_from_difference(diag_pair).p_minus_pq == diag([0, 1, 0], QQ)
    r = calc.derived_from_difference(pair_a)
    assert r.p_minus_pq == pair_a.p
    assert r.p_minus_qp == M([[1, 0], [0, 0]], QQ)
    assert r.one_minus_pqp == identity(2, QQ)
    assert r.one_minus_pq == identity(2, QQ)
    assert r.index == 0
    r = calc.derived_from_difference(qpair([[1, 1], [0, 0]], [[1, 0], [0, 0]]))
    assert r.p_minus_pq.is_zero()


def test_complement_derived_examples(pair_a):
    r = calc.derived_from_complement(pair_a)
    assert r.pqp.is_zero() and r.pq.is_zero()
    r = calc.derived_from_complement(qpair([[1, 0], [0, 0]], [[1, 0], [0, 0]]))
    assert r.pq == diag([1, 0], QQ)
    r = calc.derived_from_complement(qpair([[1, 0], [0, 1]], [[0, 0], [0, 0]]))
    assert r.pq.is_zero()


def test_product_identities_examples(pair_a, diag_pair):
    r = calc.product_identities(diag_pair)
    assert r.pq_d == diag([1, 0, 0], QQ)
    assert r.pq_d_is_qp and r.commutes
    r = calc.product_identities(pair_a)
    assert r.pq_d.is_zero()
    assert not r.pq_d_is_qp and not r.commutes


def test_commutation_criterion_converse_fails():
    # pair_a with the roles swapped: qp = 0 and pq is a nonzero nilpotent,
    # so (pq)^D = 0 = qp although pq != qp
    pair = qpair([[0, 0], [0, 1]], [[1, 0], [1, 0]])
    assert (pair.q * pair.p).is_zero()
    assert drazin(pair.p * pair.q).index == 2
    with pytest.raises(IdentityViolation) as exc:
        calc.product_identities(pair)
    assert exc.value.equation == "T3.7(1)"
    assert "ind(pq) = 2" in exc.value.detail


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4), st.sampled_from([GF(2), GF(3), GF(7), QQ]))
def test_commutation_criterion_with_group_invertible_product(seed, n, domain):
    """(pq)^D = qp iff pq = qp holds whenever ind(pq) <= 1."""
    rng = random.Random(seed)
    pair = special_pairs(rng.choice(["commuting", "unrestricted"]), GenSpec(domain, n), rng)
    pq, qp = pair.p * pair.q, pair.q * pair.p
    r = drazin(pq)
    if r.index <= 1:
        assert (r.d == qp) == (pq == qp)
    else:
        assert pq != qp  # commuting idempotents give an idempotent product


def test_difference_from_products_examples(pair_a, diag_pair):
    e = diag([1, 0], QQ)
    assert calc.difference_from_products(IdempotentPair(e, e)).is_zero()
    assert calc.difference_from_products(pair_a) == M([[1, 0], [1, -1]], QQ)
    assert calc.difference_from_products(diag_pair) == diag([0, 1, 0], QQ)


def test_projector_criteria_examples():
    inv = calc.transpose_involution(Q2)
    v = calc.projector_criteria(qpair([[1, 0], [0, 0]], [[0, 0], [0, 1]]), inv)
    assert v.sum_fixed and v.annihilate and v.difference_fixed and v.commutes
    v = calc.projector_criteria(qpair([[1, 0], [0, 0]], [[half, half], [half, half]]), inv)
    assert not v.difference_fixed and not v.commutes
    assert drazin(M([[half, -half], [-half, -half]], QQ)).d == M([[1, -1], [-1, -1]], QQ)
    v = calc.projector_criteria(qpair([[1, 0], [0, 0]], [[1, 0], [0, 0]]), inv)
    assert (v.sum_fixed, v.annihilate) == (False, False)
    assert (v.difference_fixed, v.commutes) == (True, True)


def test_projector_criteria_rejections(pair_a):
    with pytest.raises(SixNotInvertible):
        e = diag([1, 0], GF(2))
        calc.projector_criteria(IdempotentPair(e, e), calc.transpose_involution(MatrixRing(GF(2), 2)))
    e5 = diag([1, 0], GF(5))
    with pytest.raises(NotStarReducing):
        calc.projector_criteria(IdempotentPair(e5, e5), calc.transpose_involution(MatrixRing(GF(5), 2)))
    with pytest.raises(NotAProjector):
        calc.projector_criteria(pair_a, calc.transpose_involution(Q2))


def test_sum_via_difference_examples(pair_a):
    r = calc.sum_via_difference(pair_a)
    assert r.pi.is_zero()
    assert r.sum_d == M([[1, 0], [-1, 1]], QQ)
    p, q = identity(2, GF(7)), diag([1, 0], GF(7))
    with pytest.raises(PreconditionViolated) as exc:
        calc.sum_via_difference(IdempotentPair(p, q))
    assert exc.value.witness == diag([2, 0], GF(7))
    e = random_idempotent(GenSpec(GF(2), 3), random.Random(5))
    r = calc.sum_via_difference(IdempotentPair(e, e))
    assert r.sum_d.is_zero()


def test_difference_via_corner_examples(pair_a):
    r = calc.difference_via_corner(pair_a)
    assert r.diff_d == pair_a.p - pair_a.q
    assert r.residual.is_zero()
    e = diag([1, 1, 0], QQ)
    assert calc.difference_via_corner(IdempotentPair(e, e)).diff_d.is_zero()
    p, q = identity(2, GF(7)), diag([1, 0], GF(7))
    assert calc.difference_via_corner(IdempotentPair(p, q)).residual is None
    with pytest.raises(PreconditionViolated):
        calc.difference_via_corner(IdempotentPair(p, q), require_residual=True)


def test_invertible_case_examples(pair_a):
    r = calc.invertible_case(pair_a)
    assert r.diff_inv_fg == M([[1, 0], [1, -1]], QQ)
    assert r.sum_inv_fg == M([[1, 0], [-1, 1]], QQ)
    r = calc.invertible_case(qpair([[1, 0], [0, 1]], [[0, 0], [0, 0]]))
    assert r.diff_inv_fg == identity(2, QQ) == r.sum_inv_fg
    r = calc.invertible_case(qpair([[1, 0], [0, 0]], [[0, 0], [0, 1]]))
    assert r.diff_inv_fg == diag([1, -1], QQ)
    assert r.sum_inv_fg == identity(2, QQ)
    with pytest.raises(PreconditionViolated):
        calc.invertible_case(qpair([[1, 0], [0, 0]], [[1, 0], [0, 0]]))


def test_sigma_census_integers():
    fam = calc.sigma_census(IdempotentPair(1, 1, IntegerRing()))
    assert fam.all_invertible
    assert [fam.members[k] for k in calc.SIGMA_LABELS] == [0] * 8 + [1]


def test_sigma_census_scalar_rings():
    t = TableRing.from_modular(4)
    fam = calc.sigma_census(IdempotentPair(t.one, t.one, t))
    assert fam.all_invertible
    fam = calc.sigma_census(IdempotentPair(1, 0, IntegerRing()))
    assert fam.all_invertible and all(fam.triple_verdicts.values())


def test_sigma_census_modular():
    for n in (6, 10, 12, 30):
        ctx_ids = [x for x in range(n) if x * x % n == x]
        for p in ctx_ids:
            for q in ctx_ids:
                fam = calc.sigma_census(IdempotentPair(ModularInt(p, n), ModularInt(q, n)))
                assert fam.all_invertible


def test_cline_examples():
    a, b = M([[0, 1], [0, 0]], QQ), M([[0, 0], [1, 0]], QQ)
    assert calc.cline(a, b) == diag([0, 1], QQ) == b * a
    e = diag([1, 0], QQ)
    assert calc.cline(e, e) == e
    a, b = diag([2, 0], GF(7)), diag([3, 5], GF(7))
    calc.cline(a, b)
    assert drazin(a * b).d == diag([6, 0], GF(7))


def test_jacobson_examples():
    a, b = M([[0, 1], [0, 0]], QQ), M([[0, 0], [1, 0]], QQ)
    r = calc.jacobson(a, b)
    assert (r.d, r.k, r.r_sum) == (diag([1, 0], QQ), 1, identity(2, QQ))
    r = calc.jacobson(zeros(2, 2, QQ), b)
    assert (r.d, r.k) == (identity(2, QQ), 0)
    assert r.r_sum.is_zero()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_jacobson_with_invertible_one_minus_ab(seed, n):
    rng = random.Random(seed)
    f = GF(7)
    a = Matrix(n, n, [rng.randrange(7) for _ in range(n * n)], f)
    b = Matrix(n, n, [rng.randrange(7) for _ in range(n * n)], f)
    r = calc.jacobson(a, b)
    if r.k == 0:
        assert r.d == 1 + b * (1 - a * b) ** -1 * a


PAIR_FUNCS = [
    calc.fgh_relations,
    calc.derived_from_difference,
    calc.derived_from_complement,
    calc.difference_from_products,
    calc.difference_via_corner,
    calc.sigma_census,
]


@pytest.mark.parametrize("func", PAIR_FUNCS, ids=lambda f: f.__name__)
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4), st.sampled_from([GF(2), GF(3), GF(13), QQ]))
def test_pair_identities_hold(func, seed, n, domain):
    rng = random.Random(seed)
    pair = special_pairs(rng.choice(["commuting", "unrestricted", "nilpotent-condition"]), GenSpec(domain, n), rng)
    func(pair)
    func(pair.swapped())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 5), st.sampled_from([GF(2), GF(3), GF(7), QQ]))
def test_sum_via_difference_under_condition(seed, n, domain):
    rng = random.Random(seed)
    pair = special_pairs("nilpotent-condition", GenSpec(domain, n), rng)
    calc.sum_via_difference(pair)
    calc.difference_via_corner(pair, require_residual=True)
