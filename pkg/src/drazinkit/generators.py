"""Seeded construction of idempotents, projectors and special pairs.

Randomness comes from :class:`random.Random` (MT19937), seeded per trial
with ``trial_seed(seed, i)``, a SplitMix64 finalizer over the campaign seed
and the trial index. A trial's objects therefore depend only on
``(seed, i)``, never on which trials ran before it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .calculus import IdempotentPair, sum_condition_holds
from .engine import MatrixRing
from .errors import RetryLimitExceeded, UnsupportedDomain
from .matrix import Matrix, diag, identity, inverse, mat_mul, rank, transpose, zeros, block_diag
from .scalars import Domain, Kind

RETRY_CAP = 1000
_MASK = (1 << 64) - 1

KINDS = (
    "commuting",
    "annihilating-projectors",
    "nilpotent-condition",
    "unrestricted",
    "commuting-projectors",
    "projectors",
    "difference-invertible",
)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def trial_seed(seed: int, trial: int) -> int:
    return splitmix64(splitmix64(seed & _MASK) ^ (trial & _MASK))


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(trial_seed(seed, trial))


@dataclass(frozen=True)
class GenSpec:
    """What to generate. ``rank=None`` lets the generator draw it."""

    domain: Domain
    n: int
    rank: Optional[int] = None
    seed: int = 0
    bound: int = 5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.rank is not None and not 0 <= self.rank <= self.n:
            raise ValueError(f"rank {self.rank} outside [0, {self.n}]")
        if self.bound < 1:
            raise ValueError("entry bound must be positive")


def _rng(spec: GenSpec, rng: Optional[random.Random]) -> random.Random:
    return rng if rng is not None else random.Random(spec.seed)


def _require_field(d: Domain):
    if not d.is_field:
        raise UnsupportedDomain(f"generators need a field, got {d}")


def _scalar(d: Domain, rng: random.Random, bound: int):
    if d.is_modular:
        return rng.randrange(d.modulus)
    return rng.randint(-bound, bound)


def random_matrix(spec: GenSpec, rng: Optional[random.Random] = None, rows=None, cols=None) -> Matrix:
    """Entrywise uniform matrix (bounded integers over Q)."""
    rng = _rng(spec, rng)
    rows = spec.n if rows is None else rows
    cols = spec.n if cols is None else cols
    return Matrix(rows, cols, [_scalar(spec.domain, rng, spec.bound) for _ in range(rows * cols)], spec.domain)


def random_invertible(spec: GenSpec, rng: Optional[random.Random] = None) -> Matrix:
    _require_field(spec.domain)
    rng = _rng(spec, rng)
    for _ in range(RETRY_CAP):
        s = random_matrix(spec, rng)
        if rank(s) == spec.n:
            return s
    raise RetryLimitExceeded(f"no invertible {spec.n}x{spec.n} matrix in {RETRY_CAP} draws")


def random_idempotent(spec: GenSpec, rng: Optional[random.Random] = None, rank_: Optional[int] = None) -> Matrix:
    """S diag(I_r, 0) S^-1 for a random invertible S."""
    rng = _rng(spec, rng)
    r = rank_ if rank_ is not None else spec.rank
    if r is None:
        r = rng.randint(0, spec.n)
    s = random_invertible(spec, rng)
    p = mat_mul(mat_mul(s, diag([1] * r + [0] * (spec.n - r), spec.domain)), inverse(s))
    assert p * p == p
    return p


def random_nilpotent(spec: GenSpec, rng: Optional[random.Random] = None) -> Matrix:
    """Conjugate of a random strictly upper triangular matrix."""
    rng = _rng(spec, rng)
    n, d = spec.n, spec.domain
    ent = [_scalar(d, rng, spec.bound) if j > i else 0 for i in range(n) for j in range(n)]
    s = random_invertible(spec, rng)
    return mat_mul(mat_mul(s, Matrix(n, n, ent, d)), inverse(s))


def random_core_nilpotent(spec: GenSpec, rng: Optional[random.Random] = None) -> Matrix:
    """S diag(C, N) S^-1 with C invertible and N strictly upper triangular,
    so the index is spread over 0..n instead of being almost always 0."""
    rng = _rng(spec, rng)
    n, d = spec.n, spec.domain
    r = rng.randint(0, n)
    blocks = []
    if r:
        blocks.append(random_invertible(GenSpec(d, r, bound=spec.bound), rng))
    if n - r:
        m = n - r
        ent = [_scalar(d, rng, spec.bound) if j > i else 0 for i in range(m) for j in range(m)]
        blocks.append(Matrix(m, m, ent, d))
    core = blocks[0] if len(blocks) == 1 else block_diag(*blocks)
    s = random_invertible(spec, rng)
    return mat_mul(mat_mul(s, core), inverse(s))


def random_projector(spec: GenSpec, rng: Optional[random.Random] = None, rank_: Optional[int] = None) -> Matrix:
    """Orthogonal projection B (B^T B)^-1 B^T onto the span of a random
    full-column-rank integer matrix B."""
    if spec.domain.kind is not Kind.RATIONALS:
        raise UnsupportedDomain("projectors are generated over the rationals only")
    rng = _rng(spec, rng)
    n = spec.n
    r = rank_ if rank_ is not None else spec.rank
    if r is None:
        r = rng.randint(0, n)
    if r == 0:
        return zeros(n, n, spec.domain)
    for _ in range(RETRY_CAP):
        b = random_matrix(spec, rng, rows=n, cols=r)
        if rank(b) == r:
            break
    else:
        raise RetryLimitExceeded("no full-column-rank B")
    return orthogonal_projection(b)


def orthogonal_projection(b: Matrix) -> Matrix:
    """B (B^T B)^-1 B^T for B of full column rank (rationals)."""
    bt = transpose(b)
    p = mat_mul(mat_mul(b, inverse(mat_mul(bt, b))), bt)
    assert p * p == p and transpose(p) == p
    return p


def random_orthogonal(spec: GenSpec, rng: Optional[random.Random] = None) -> Matrix:
    """Rational orthogonal matrix (I - K)(I + K)^-1 from a random skew K."""
    rng = _rng(spec, rng)
    n, d = spec.n, spec.domain
    k = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-spec.bound, spec.bound)
            k[i][j], k[j][i] = v, -v
    km = Matrix.from_rows(k, d)
    one = identity(n, d)
    o = mat_mul(one - km, inverse(one + km))
    assert mat_mul(o, transpose(o)) == one
    return o


def _zero_one_diag(n, rng, d):
    return diag([rng.randint(0, 1) for _ in range(n)], d)


def special_pairs(kind: str, spec: GenSpec, rng: Optional[random.Random] = None) -> IdempotentPair:
    """Draw an idempotent pair of the requested kind.

    commuting
        simultaneous conjugates of two 0/1 diagonals
    annihilating-projectors
        orthogonal projections onto disjoint coordinate sets, conjugated by a
        rational orthogonal matrix (pq = qp = 0; rationals only)
    commuting-projectors
        same but with overlapping coordinate sets (pq = qp, usually != 0)
    projectors
        two independent orthogonal projections
    difference-invertible
        independent idempotents of complementary rank, redrawn until p - q
        is invertible
    nilpotent-condition
        pairs with (p+q)(p-q)^pi nilpotent: a block where p-q is invertible
        plus a block where p = q = 0, conjugated; in characteristic 2 any
        pair qualifies
    unrestricted
        two independent random idempotents
    """
    _require_field(spec.domain)
    rng = _rng(spec, rng)
    n, d = spec.n, spec.domain
    ctx = MatrixRing(d, n)
    if kind == "unrestricted":
        return IdempotentPair(random_idempotent(spec, rng), random_idempotent(spec, rng), ctx)
    if kind == "commuting":
        s = random_invertible(spec, rng)
        si = inverse(s)
        p = mat_mul(mat_mul(s, _zero_one_diag(n, rng, d)), si)
        q = mat_mul(mat_mul(s, _zero_one_diag(n, rng, d)), si)
        pair = IdempotentPair(p, q, ctx)
        assert p * q == q * p
        return pair
    if kind in ("annihilating-projectors", "commuting-projectors"):
        if d.kind is not Kind.RATIONALS:
            raise UnsupportedDomain(f"{kind} needs the rationals")
        o = random_orthogonal(spec, rng)
        ot = transpose(o)
        if kind == "annihilating-projectors":
            slots = [rng.randint(0, 2) for _ in range(n)]  # 0: neither, 1: p, 2: q
            d1 = diag([int(s == 1) for s in slots], d)
            d2 = diag([int(s == 2) for s in slots], d)
        else:
            d1, d2 = _zero_one_diag(n, rng, d), _zero_one_diag(n, rng, d)
        p = mat_mul(mat_mul(o, d1), ot)
        q = mat_mul(mat_mul(o, d2), ot)
        pair = IdempotentPair(p, q, ctx)
        assert transpose(p) == p and transpose(q) == q and p * q == q * p
        if kind == "annihilating-projectors":
            assert (p * q).is_zero()
        return pair
    if kind == "projectors":
        return IdempotentPair(random_projector(spec, rng), random_projector(spec, rng), ctx)
    if kind == "difference-invertible":
        p, q = _invertible_difference(spec, rng)
        return IdempotentPair(p, q, ctx)
    if kind == "nilpotent-condition":
        pair = _nilpotent_condition_pair(spec, rng, ctx)
        assert sum_condition_holds(pair)
        return pair
    raise ValueError(f"unknown pair kind {kind!r}")


def _invertible_difference(spec, rng):
    m = spec.n
    for _ in range(RETRY_CAP):
        r = rng.randint(0, m)
        p = random_idempotent(spec, rng, r)
        q = random_idempotent(spec, rng, m - r)
        if rank(p - q) == m:
            return p, q
    raise RetryLimitExceeded("no pair with p - q invertible")


def _nilpotent_condition_pair(spec, rng, ctx):
    n, d = spec.n, spec.domain
    if d.characteristic == 2 and rng.random() < 0.5:
        # p + q = p - q here, so the condition holds for every pair
        return IdempotentPair(random_idempotent(spec, rng), random_idempotent(spec, rng), ctx)
    dead = 0 if rng.random() < 0.5 else rng.randint(1, n)
    m = n - dead
    p1 = q1 = None
    if m:
        try:
            p1, q1 = _invertible_difference(GenSpec(d, m, bound=spec.bound), rng)
        except RetryLimitExceeded:
            if d.characteristic != 2:
                raise
            p = random_idempotent(spec, rng)
            return IdempotentPair(p, p, ctx)
    if dead:
        z = zeros(dead, dead, d)
        p0 = z if p1 is None else block_diag(p1, z)
        q0 = z if q1 is None else block_diag(q1, z)
    else:
        p0, q0 = p1, q1
    s = random_invertible(spec, rng)
    si = inverse(s)
    return IdempotentPair(mat_mul(mat_mul(s, p0), si), mat_mul(mat_mul(s, q0), si), ctx)
