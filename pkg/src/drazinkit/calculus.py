"""Closed-form Drazin inverses built from a pair of idempotents.

Every operation here evaluates a closed-form expression and then certifies
it twice before returning: the candidate must satisfy the defining
conditions (``is_drazin_pair``) for its target element, and it must equal
what the engine computes for that target directly. Any disagreement raises
:class:`~drazinkit.errors.IdentityViolation` carrying the id of the identity
that broke (``"T3.5(3)"`` etc., the same ids the ``verify`` command uses).
Nothing is silently repaired.

All functions are generic over the ring contexts of
:mod:`drazinkit.engine`; ring elements only need ``+ - * **`` and
``1 - x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

from .engine import (
    DrazinResult,
    MatrixRing,
    RingContext,
    context_of,
    is_drazin_invertible,
    is_drazin_pair,
    is_nilpotent,
)
from .errors import (
    IdentityViolation,
    NonIdempotentInput,
    NotAProjector,
    NotDrazinInvertible,
    NotStarReducing,
    PreconditionViolated,
    SixNotInvertible,
)
from .matrix import Matrix, inverse, transpose
from .scalars import Kind


@dataclass(frozen=True)
class IdempotentPair:
    p: Any
    q: Any
    ctx: RingContext = None

    def __post_init__(self):
        ctx = self.ctx or context_of(self.p)
        object.__setattr__(self, "ctx", ctx)
        if not ctx.owns(self.p) or not ctx.owns(self.q):
            raise NonIdempotentInput(f"p and q must both live in {ctx}")
        if self.p * self.p != self.p:
            raise NonIdempotentInput("p is not idempotent")
        if self.q * self.q != self.q:
            raise NonIdempotentInput("q is not idempotent")

    def swapped(self) -> "IdempotentPair":
        return IdempotentPair(self.q, self.p, self.ctx)


@dataclass(frozen=True)
class IdempotentTriple:
    F: Any
    G: Any
    H: Any


@dataclass(frozen=True)
class InvolutiveContext:
    ctx: RingContext
    star: Callable[[Any], Any]
    star_reducing: bool


def transpose_involution(ctx: MatrixRing) -> InvolutiveContext:
    """Transpose on a matrix ring; *-reducing only over the rationals."""
    return InvolutiveContext(ctx, transpose, ctx.domain.kind is Kind.RATIONALS)


# -- certification helpers -------------------------------------------


def _expect(ok: bool, eq: str, detail: str = ""):
    if not ok:
        raise IdentityViolation(eq, detail)


def _dual_check(target, candidate, ctx: RingContext, eq: str):
    """Candidate must be a Drazin inverse of target and match the engine."""
    if not is_drazin_pair(target, candidate, ctx):
        raise IdentityViolation(eq, "fails the Drazin axioms")
    try:
        engine = ctx.drazin(target).d
    except NotDrazinInvertible:
        raise IdentityViolation(eq, "engine says target is not Drazin invertible") from None
    if engine != candidate:
        raise IdentityViolation(eq, "disagrees with the engine")


def _D(x, ctx: RingContext) -> DrazinResult:
    return ctx.drazin(x)


def _sum(terms, ctx: RingContext):
    out = ctx.zero
    for t in terms:
        out = out + t
    return out


# -- F, G, H ----------------------------------------------------------


def fgh(pair: IdempotentPair) -> IdempotentTriple:
    """The idempotents ``p (p-q)^D``, ``(p-q)^D p`` and ``(p-q)^D (p-q)``.

    Also checks the alternate factorizations of the first two through
    ``1 - q`` and that all three are idempotent.
    """
    p, q, ctx = pair.p, pair.q, pair.ctx
    d = _D(p - q, ctx).d
    F, G, H = p * d, d * p, d * (p - q)
    _expect(F == d * (1 - q), "T3.2(1)", "p(p-q)^D != (p-q)^D(1-q)")
    _expect(G == (1 - q) * d, "T3.2(2)", "(p-q)^D p != (1-q)(p-q)^D")
    _expect(F * F == F, "T3.2(F)", "F not idempotent")
    _expect(G * G == G, "T3.2(G)", "G not idempotent")
    _expect(H * H == H, "T3.2(H)", "H not idempotent")
    _expect(H == (p - q) * d, "T3.2(H')", "H does not commute through")
    return IdempotentTriple(F, G, H)


def fgh_relations(pair: IdempotentPair, triple: Optional[IdempotentTriple] = None) -> IdempotentTriple:
    """Commutation relations between p, q and F, G, H."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    t = triple or fgh(pair)
    F, G, H = t.F, t.G, t.H
    d = _D(p - q, ctx).d
    _expect(q * d == d * (1 - p), "C3.3(1)")
    _expect(d * q == (1 - p) * d, "C3.3(2)")
    _expect(q * H == H * q, "C3.3(3)")
    _expect(G * (1 - q) == (1 - q) * F, "C3.3(4)")
    fp = F * p
    _expect(fp == p * G and fp == p * H and fp == H * p, "T3.4(1)")
    qh = q * H
    _expect(q * H * q == qh and qh == H * q and qh == H * q * H, "T3.4(2)")
    return t


# -- formulas through (p - q)^D ---------------------------------------


@dataclass(frozen=True)
class DifferenceDerived:
    one_minus_pqp: Any
    p_minus_pqp: Any
    p_minus_pq: Any
    p_minus_qp: Any
    one_minus_pq: Any
    index: int


def derived_from_difference(pair: IdempotentPair) -> DifferenceDerived:
    """Drazin inverses of 1-pqp, p-pqp, p-pq, p-qp and 1-pq from (p-q)^D.

    The last one uses the truncated sum over i < ind(p-q) of
    ``(p-q)^pi (p-q)^(2i)``; the sum is empty (zero) when the index is 0.
    """
    p, q, ctx = pair.p, pair.q, pair.ctx
    res = _D(p - q, ctx)
    d, k, pi = res.d, res.index, res.pi
    d2 = d * d
    d3 = d2 * d
    pq, qp = p * q, q * p
    pqp = pq * p

    x1 = d2 * p + 1 - p
    _dual_check(1 - pqp, x1, ctx, "T3.5(1)")

    x2 = d2 * p
    _expect(x2 == p * d2, "T3.5(2)", "[(p-q)^D]^2 p != p [(p-q)^D]^2")
    _dual_check(p - pqp, x2, ctx, "T3.5(2)")

    x3 = p * d3
    _dual_check(p - pq, x3, ctx, "T3.5(3)")

    x4 = d3 * p
    _dual_check(p - qp, x4, ctx, "T3.5(4)")

    sq = (p - q) * (p - q)
    partial = _sum((pi * sq**i for i in range(k)), ctx)
    x5 = 1 - p + d2 * (p + pq * (1 - p)) + partial * pq * (p - 1)
    _dual_check(1 - pq, x5, ctx, "T3.5(5)")
    return DifferenceDerived(x1, x2, x3, x4, x5, k)


@dataclass(frozen=True)
class ComplementDerived:
    pqp: Any
    pq: Any


def derived_from_complement(pair: IdempotentPair) -> ComplementDerived:
    """(pqp)^D and (pq)^D from powers of (1-p-q)^D."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    e = _D(1 - p - q, ctx).d
    e2 = e * e
    pq = p * q
    x_pqp = e2 * p
    _expect(x_pqp == p * e2, "T3.6(1)", "[(1-p-q)^D]^2 p != p [(1-p-q)^D]^2")
    _dual_check(pq * p, x_pqp, ctx, "T3.6(1)")
    x_pq = e2 * e2 * pq
    _dual_check(pq, x_pq, ctx, "T3.6(2)")
    return ComplementDerived(x_pqp, x_pq)


@dataclass(frozen=True)
class ProductIdentities:
    pq_d: Any
    pq_d_is_qp: bool
    commutes: bool


def product_identities(pair: IdempotentPair) -> ProductIdentities:
    """(pq)^D as (pqp)^D - p((1-q)(1-p))^D, plus the commutation criterion
    ``(pq)^D == qp  <=>  pq == qp``."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    pq, qp = p * q, q * p
    k = _D(pq, ctx).index  # precondition: raises NotDrazinInvertible
    pqp_d = _D(pq * p, ctx).d
    x = pqp_d - p * _D((1 - q) * (1 - p), ctx).d
    _dual_check(pq, x, ctx, "T3.7(2)")
    _expect(x * pq == pqp_d * pq, "T3.7(3)")
    lhs, rhs = x == qp, pq == qp
    _expect(lhs == rhs, "T3.7(1)", f"(pq)^D == qp is {lhs} but pq == qp is {rhs}; ind(pq) = {k}")
    return ProductIdentities(x, lhs, rhs)


def difference_from_products(pair: IdempotentPair):
    """(p-q)^D = (1-pq)^D (p-pq) + (p+q-pq)^D (pq-q)."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    pq = p * q
    x = _D(1 - pq, ctx).d * (p - pq) + _D(p + q - pq, ctx).d * (pq - q)
    _dual_check(p - q, x, ctx, "T3.8")
    return x


# -- projectors ---------------------------------------------------------


@dataclass(frozen=True)
class ProjectorVerdicts:
    difference_fixed: bool
    commutes: bool
    sum_fixed: bool
    annihilate: bool


def projector_criteria(pair: IdempotentPair, inv: InvolutiveContext) -> ProjectorVerdicts:
    """For projectors in a *-reducing ring:

    * ``(p-q)^D == p-q``  iff  ``pq == qp``
    * ``(p+q)^D == p+q``  iff  ``pq == qp == 0`` (needs 6 invertible)

    Both sides of each equivalence are evaluated independently.
    """
    p, q, ctx = pair.p, pair.q, pair.ctx
    char = getattr(getattr(ctx, "domain", None), "characteristic", 0)
    if char in (2, 3):
        raise SixNotInvertible(f"6 is not invertible in characteristic {char}")
    if not inv.star_reducing:
        raise NotStarReducing("projector criteria need a *-reducing involution (rationals)")
    if inv.star(p) != p or inv.star(q) != q:
        raise NotAProjector("p and q must be fixed by the involution")
    pq, qp = p * q, q * p
    diff_fixed = _D(p - q, ctx).d == p - q
    commutes = pq == qp
    _expect(diff_fixed == commutes, "T3.9(1)", f"(p-q)^D == p-q is {diff_fixed}, pq == qp is {commutes}")
    sum_fixed = _D(p + q, ctx).d == p + q
    annihilate = ctx.is_zero(pq) and ctx.is_zero(qp)
    _expect(sum_fixed == annihilate, "T3.9(2)", f"(p+q)^D == p+q is {sum_fixed}, pq == qp == 0 is {annihilate}")
    return ProjectorVerdicts(diff_fixed, commutes, sum_fixed, annihilate)


# -- sum and difference -------------------------------------------------


def sum_condition_holds(pair: IdempotentPair) -> bool:
    """Whether ``(p+q)(p-q)^pi`` is nilpotent."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    return is_nilpotent((p + q) * _D(p - q, ctx).pi, ctx)


@dataclass(frozen=True)
class SumViaDifference:
    sum_d: Any
    diff_d: Any
    pi: Any
    triple: IdempotentTriple


def sum_via_difference(pair: IdempotentPair) -> SumViaDifference:
    """(p+q)^D from (p-q)^D, valid when (p+q)(p-q)^pi is nilpotent.

    Checks both conjugation formulas, equality of the spectral idempotents,
    (p-q)^D = F+G-H and (p+q)^D = (2G-H)(F+G-H).
    """
    p, q, ctx = pair.p, pair.q, pair.ctx
    res = _D(p - q, ctx)
    d, pi = res.d, res.pi
    s_pq = p + q
    w = s_pq * pi
    if not is_nilpotent(w, ctx):
        raise PreconditionViolated("(p+q)(p-q)^pi is not nilpotent", witness=w)
    x = d * s_pq * d
    _dual_check(s_pq, x, ctx, "T3.10(1)")
    _expect(d == x * (p - q) * x, "T3.10(2)")
    _expect(pi == 1 - s_pq * x, "T3.10(3)")
    t = fgh(pair)
    fg_h = t.F + t.G - t.H
    _expect(d == fg_h, "T3.10(4)")
    _expect(x == (2 * t.G - t.H) * fg_h, "T3.10(5)")
    return SumViaDifference(x, d, pi, t)


@dataclass(frozen=True)
class CornerResult:
    diff_d: Any
    residual: Any  # None when the nilpotency hypothesis fails


def difference_via_corner(pair: IdempotentPair, require_residual: bool = False) -> CornerResult:
    """(p-q)^D = (p-q)^2 ((p-qp)^D - (q-qp)^D), and the vanishing of
    p((p+q)^D - (p-q)^D)(p-q)^2.

    The second statement is only evaluated when (p+q)(p-q)^pi is nilpotent;
    with a merely Drazin invertible (p+q)(p-q)^pi it is false in general.
    """
    p, q, ctx = pair.p, pair.q, pair.ctx
    qp = q * p
    sq = (p - q) * (p - q)
    x = sq * (_D(p - qp, ctx).d - _D(q - qp, ctx).d)
    _dual_check(p - q, x, ctx, "T3.11(1)")
    if not sum_condition_holds(pair):
        if require_residual:
            raise PreconditionViolated("(p+q)(p-q)^pi is not nilpotent")
        return CornerResult(x, None)
    residual = p * (_D(p + q, ctx).d - x) * sq
    _expect(ctx.is_zero(residual), "T3.11(2)")
    return CornerResult(x, residual)


def _inverse(x, ctx: RingContext):
    if isinstance(x, Matrix):
        return inverse(x)
    res = _D(x, ctx)
    if res.index != 0:
        raise NotDrazinInvertible("not invertible")
    return res.d


@dataclass(frozen=True)
class InvertibleCase:
    sum_inv_conj: Any
    diff_inv_conj: Any
    diff_inv_fg: Any
    sum_inv_fg: Any


def invertible_case(pair: IdempotentPair) -> InvertibleCase:
    """Inverses of p+q and p-q when p-q is invertible, four ways."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    res = _D(p - q, ctx)
    if res.index != 0:
        raise PreconditionViolated("p-q is not invertible", witness=p - q)
    di = res.d
    s = p + q
    F, G = p * di, di * p
    one = ctx.one

    def is_inverse(x, y):
        return x * y == one and y * x == one

    try:
        s_inv = _inverse(s, ctx)
    except (ArithmeticError, NotDrazinInvertible):
        raise IdentityViolation("C3.12(1)", "p+q is not invertible") from None

    x1 = di * s * di
    _expect(x1 == s_inv and is_inverse(s, x1), "C3.12(1)")
    x2 = x1 * (p - q) * x1
    _expect(x2 == di and is_inverse(p - q, x2), "C3.12(2)")
    x3 = F + G - 1
    _expect(x3 == di, "C3.12(3)")
    x4 = (2 * G - 1) * x3
    _expect(x4 == s_inv, "C3.12(4)")
    if isinstance(p, Matrix):
        _expect(inverse(p - q) == di, "C3.12(3)", "matrix inverse disagrees")
    return InvertibleCase(x1, x2, x3, x4)


# -- Drazin invertibility census ---------------------------------------

SIGMA_LABELS = ("p-q", "1-pq", "p-pq", "p-qp", "p-pqp", "1-qp", "q-pq", "q-qp", "p+q-pq")


@dataclass(frozen=True)
class SigmaFamily:
    members: Dict[str, Any]
    verdicts: Dict[str, bool]
    triple_verdicts: Dict[str, bool] = field(default_factory=dict)

    @property
    def all_invertible(self) -> bool:
        return all(self.verdicts.values())


def sigma_census(pair: IdempotentPair) -> SigmaFamily:
    """Drazin invertibility of the nine Σ expressions and of pq, 1-p-q,
    (1-p)(1-q); each group must be all-or-none."""
    p, q, ctx = pair.p, pair.q, pair.ctx
    pq, qp = p * q, q * p
    members = {
        "p-q": p - q,
        "1-pq": 1 - pq,
        "p-pq": p - pq,
        "p-qp": p - qp,
        "p-pqp": p - pq * p,
        "1-qp": 1 - qp,
        "q-pq": q - pq,
        "q-qp": q - qp,
        "p+q-pq": p + q - pq,
    }
    verdicts = {k: is_drazin_invertible(v, ctx) for k, v in members.items()}
    _expect(len(set(verdicts.values())) == 1, "L2.1", f"mixed verdicts {verdicts}")
    triple = {
        "pq": is_drazin_invertible(pq, ctx),
        "1-p-q": is_drazin_invertible(1 - p - q, ctx),
        "(1-p)(1-q)": is_drazin_invertible((1 - p) * (1 - q), ctx),
    }
    _expect(len(set(triple.values())) == 1, "L2.2", f"mixed verdicts {triple}")
    return SigmaFamily(members, verdicts, triple)


# -- general elements -------------------------------------------------


def cline(a, b, ctx: Optional[RingContext] = None):
    """(ba)^D = b ((ab)^D)^2 a; for commuting a, b also (ab)^D = b^D a^D."""
    ctx = ctx or context_of(a)
    ab_d = _D(a * b, ctx).d
    x = b * ab_d * ab_d * a
    _dual_check(b * a, x, ctx, "L2.3")
    if a * b == b * a:
        a_d, b_d = _D(a, ctx).d, _D(b, ctx).d
        _expect(ab_d == b_d * a_d and ab_d == a_d * b_d, "L2.3(commuting)")
    return x


@dataclass(frozen=True)
class JacobsonResult:
    d: Any
    k: int
    r_sum: Any


def jacobson(a, b, ctx: Optional[RingContext] = None) -> JacobsonResult:
    """(1-ba)^D = 1 + b((1-ab)^D - (1-ab)^pi r) a with r the sum of the
    powers (1-ab)^i for i < k = ind(1-ab); ind(1-ba) must equal k."""
    ctx = ctx or context_of(a)
    u = 1 - a * b
    res = _D(u, ctx)
    k = res.index
    r = _sum((u**i for i in range(k)), ctx)
    d = 1 + b * (res.d - res.pi * r) * a
    target = 1 - b * a
    _dual_check(target, d, ctx, "L2.4")
    _expect(_D(target, ctx).index == k, "L2.4(index)", "ind(1-ba) != ind(1-ab)")
    return JacobsonResult(d, k, r)
