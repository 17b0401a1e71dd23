"""Drazin inverses, indices and spectral idempotents.

Ring contexts
-------------
Elements handed to the generic routines here (and to
:mod:`drazinkit.calculus`) all support ``+ - * **`` and ``1 - x``; what
differs between rings is collected in a :class:`RingContext`:

=====================  =============================  ==========================
context                elements                       Drazin route
=====================  =============================  ==========================
:class:`MatrixRing`    :class:`~drazinkit.Matrix`     Fitting decomposition
:class:`ModularRing`   :class:`ModularInt`            CRT split unit/nilpotent
:class:`IntegerRing`   ``int``                        closed form (units, 0)
:class:`TableRing`     :class:`TableElem`             exhaustive search
=====================  =============================  ==========================

:func:`brute_force_drazin` is the independent oracle for every finite
context: it enumerates the ring and keeps whatever satisfies the three
defining conditions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Any, Iterator, Optional, Sequence

from .errors import (
    ContextTooLarge,
    DimensionMismatch,
    EngineError,
    InvalidDomain,
    NoGroupInverse,
    NotDrazinInvertible,
    UnsupportedDomain,
)
from .matrix import (
    Matrix,
    column_space_basis,
    hstack,
    identity,
    inverse,
    mat_mul,
    mat_pow,
    null_space_basis,
    rank,
    submatrix,
    zeros,
)
from .scalars import Domain, ModularInt

DEFAULT_ENUMERATION_CAP = 10**5


@dataclass(frozen=True)
class DrazinResult:
    """``d`` is the Drazin inverse, ``index`` is ind(a), ``pi = 1 - a d``,
    and ``witness`` is the least m >= 1 with ``(a - a^2 d)^m = 0``."""

    d: Any
    index: int
    pi: Any
    witness: int


# -- contexts ------------------------------------------------------------


class RingContext:
    """Common interface of the four ring kinds."""

    size: Optional[int] = None

    @property
    def one(self):
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def nil_bound(self) -> int:
        """Every nilpotent element of the ring vanishes at this power."""
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == self.zero

    def owns(self, x) -> bool:
        return True

    def elements(self) -> Iterator:
        raise ContextTooLarge(f"{self} is infinite")

    def drazin(self, x) -> DrazinResult:
        raise NotImplementedError


class MatrixRing(RingContext):
    """``M_n(domain)`` for a field domain."""

    def __init__(self, domain: Domain, n: int):
        if n < 1:
            raise DimensionMismatch("matrix ring dimension must be positive")
        self.domain = domain
        self.n = n
        self.size = domain.size ** (n * n) if domain.size else None
        self._one = identity(n, domain)
        self._zero = zeros(n, n, domain)

    @property
    def one(self):
        return self._one

    @property
    def zero(self):
        return self._zero

    @property
    def nil_bound(self):
        return self.n

    def is_zero(self, x):
        return x.is_zero()

    def owns(self, x):
        return isinstance(x, Matrix) and x.domain == self.domain and x.shape == (self.n, self.n)

    def elements(self):
        if self.size is None:
            raise ContextTooLarge(f"{self} is infinite")
        d, nn = self.domain, self.n * self.n
        for ent in itertools.product(range(d.modulus), repeat=nn):
            yield Matrix._make(self.n, self.n, ent, d)

    def drazin(self, x):
        return drazin(x)

    def __eq__(self, other):
        return isinstance(other, MatrixRing) and (self.domain, self.n) == (other.domain, other.n)

    def __hash__(self):
        return hash((self.domain, self.n))

    def __repr__(self):
        return f"MatrixRing({self.domain}, {self.n})"


class ModularRing(RingContext):
    """The scalar ring Z_n (composite moduli allowed)."""

    def __init__(self, n: int):
        if n < 2:
            raise InvalidDomain(f"Z_{n} needs n >= 2")
        self.n = n
        self.size = n

    @property
    def one(self):
        return ModularInt(1, self.n)

    @property
    def zero(self):
        return ModularInt(0, self.n)

    @property
    def nil_bound(self):
        # the exponent of any prime in n is at most log2(n)
        return max(1, (self.n - 1).bit_length())

    def owns(self, x):
        return isinstance(x, ModularInt) and x.modulus == self.n

    def elements(self):
        return (ModularInt(v, self.n) for v in range(self.n))

    def drazin(self, x):
        return modular_drazin(x)

    def __repr__(self):
        return f"ModularRing({self.n})"


class IntegerRing(RingContext):
    """The integers; only -1, 0, 1 are Drazin invertible."""

    @property
    def one(self):
        return 1

    @property
    def zero(self):
        return 0

    @property
    def nil_bound(self):
        return 1

    def owns(self, x):
        return isinstance(x, int)

    def drazin(self, x):
        return integer_drazin(x)

    def __repr__(self):
        return "IntegerRing()"


class TableElem:
    """Element of a :class:`TableRing`, identified by its index."""

    __slots__ = ("i", "ring")

    def __init__(self, i: int, ring: "TableRing"):
        self.i = i
        self.ring = ring

    def _idx(self, other):
        if isinstance(other, TableElem):
            return other.i
        if isinstance(other, int):
            return self.ring.from_int(other).i
        return None

    def __add__(self, other):
        j = self._idx(other)
        return NotImplemented if j is None else TableElem(self.ring.add[self.i][j], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return TableElem(self.ring.neg[self.i], self.ring)

    def __sub__(self, other):
        j = self._idx(other)
        return NotImplemented if j is None else TableElem(self.ring.add[self.i][self.ring.neg[j]], self.ring)

    def __rsub__(self, other):
        j = self._idx(other)
        return NotImplemented if j is None else TableElem(self.ring.add[j][self.ring.neg[self.i]], self.ring)

    def __mul__(self, other):
        if isinstance(other, TableElem):
            return TableElem(self.ring.mul[self.i][other.i], self.ring)
        if isinstance(other, int):
            return self.ring.from_int(other) * self
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other) * self
        return NotImplemented

    def __pow__(self, e: int):
        out = self.ring.one
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, TableElem):
            return self.i == other.i and self.ring is other.ring
        if isinstance(other, int):
            return self.i == self.ring.from_int(other).i
        return NotImplemented

    def __hash__(self):
        return hash((self.i, id(self.ring)))

    def __repr__(self):
        return f"<{self.ring.labels[self.i]}>"

    def __str__(self):
        return str(self.ring.labels[self.i])


class TableRing(RingContext):
    """A finite ring given by addition and multiplication tables.

    Construction audits the ring axioms on ``min(|R|^3, 10^4)`` random
    triples (plus the identities, exhaustively) and raises ``ValueError``
    on the first violation.
    """

    def __init__(
        self,
        labels: Sequence,
        add: Sequence[Sequence[int]],
        mul: Sequence[Sequence[int]],
        zero: int,
        one: int,
        audit_seed: int = 0,
    ):
        self.labels = list(labels)
        n = self.size = len(self.labels)
        self.add = [list(r) for r in add]
        self.mul = [list(r) for r in mul]
        if len(self.add) != n or len(self.mul) != n or any(
            len(r) != n for r in self.add + self.mul
        ):
            raise DimensionMismatch("tables must be |R| x |R|")
        self.zero_i, self.one_i = zero, one
        if zero == one:
            raise ValueError("ring must have 1 != 0")
        self.neg = []
        for a in range(n):
            inv = [b for b in range(n) if self.add[a][b] == zero]
            if len(inv) != 1:
                raise ValueError(f"{self.labels[a]} has no unique additive inverse")
            self.neg.append(inv[0])
        self._audit(audit_seed)

    def _audit(self, seed):
        n, A, M, z, o = self.size, self.add, self.mul, self.zero_i, self.one_i
        for a in range(n):
            if A[a][z] != a or A[z][a] != a:
                raise ValueError("zero is not an additive identity")
            if M[a][o] != a or M[o][a] != a:
                raise ValueError("one is not a multiplicative identity")
            for b in range(n):
                if A[a][b] != A[b][a]:
                    raise ValueError("addition is not commutative")
        rng = random.Random(seed)
        trials = min(n**3, 10**4)
        if n**3 <= 10**4:
            triples = itertools.product(range(n), repeat=3)
        else:
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(trials))
        for a, b, c in triples:
            if A[A[a][b]][c] != A[a][A[b][c]]:
                raise ValueError(f"addition not associative at {a, b, c}")
            if M[M[a][b]][c] != M[a][M[b][c]]:
                raise ValueError(f"multiplication not associative at {a, b, c}")
            if M[a][A[b][c]] != A[M[a][b]][M[a][c]] or M[A[a][b]][c] != A[M[a][c]][M[b][c]]:
                raise ValueError(f"distributivity fails at {a, b, c}")

    @classmethod
    def from_modular(cls, n: int) -> "TableRing":
        """Z_n written out as tables (labels are the residues)."""
        r = range(n)
        return cls(
            list(r),
            [[(a + b) % n for b in r] for a in r],
            [[a * b % n for b in r] for a in r],
            0,
            1,
        )

    def from_int(self, k: int) -> TableElem:
        idx = self.zero_i
        step = self.one_i if k >= 0 else self.neg[self.one_i]
        for _ in range(abs(k) % self._char()):
            idx = self.add[idx][step]
        return TableElem(idx, self)

    def _char(self):
        c, idx = 1, self.one_i
        while idx != self.zero_i:
            idx = self.add[idx][self.one_i]
            c += 1
        return c

    def element(self, label) -> TableElem:
        return TableElem(self.labels.index(label), self)

    @property
    def one(self):
        return TableElem(self.one_i, self)

    @property
    def zero(self):
        return TableElem(self.zero_i, self)

    @property
    def nil_bound(self):
        return self.size

    def owns(self, x):
        return isinstance(x, TableElem) and x.ring is self

    def elements(self):
        return (TableElem(i, self) for i in range(self.size))

    def drazin(self, x):
        return brute_force_drazin(x, self)

    def __repr__(self):
        return f"TableRing(|R|={self.size})"


def context_of(x) -> RingContext:
    """Infer the natural context of an element."""
    if isinstance(x, Matrix):
        if not x.is_square:
            raise DimensionMismatch("ring elements must be square matrices")
        return MatrixRing(x.domain, x.rows)
    if isinstance(x, ModularInt):
        return ModularRing(x.modulus)
    if isinstance(x, TableElem):
        return x.ring
    if isinstance(x, int):
        return IntegerRing()
    raise TypeError(f"no ring context for {x!r}")


# -- generic checks ------------------------------------------------------


def nilpotency_index(x, ctx: RingContext, bound: Optional[int] = None) -> Optional[int]:
    """Least m >= 1 with ``x**m == 0`` and m <= bound, else None."""
    bound = ctx.nil_bound if bound is None else bound
    y = x
    for m in range(1, bound + 1):
        if ctx.is_zero(y):
            return m
        if m < bound:
            y = y * x
    return None


def is_nilpotent(x, ctx: RingContext, bound: Optional[int] = None) -> bool:
    bound = ctx.nil_bound if bound is None else bound
    return ctx.is_zero(x**bound)


def is_drazin_pair(a, b, ctx: Optional[RingContext] = None, bound: Optional[int] = None) -> bool:
    """``ab = ba``, ``bab = b`` and ``a - a^2 b`` nilpotent within ``bound``."""
    ctx = ctx or context_of(a)
    if isinstance(a, Matrix) and (a.shape != b.shape or not a.is_square):
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    ab = a * b
    if ab != b * a:
        return False
    if b * ab != b:
        return False
    return is_nilpotent(a - a * ab, ctx, bound)


def make_result(a, d, ctx: RingContext, index: Optional[int] = None) -> DrazinResult:
    """Package ``d`` (already known to be a^D) with pi, index and witness."""
    ad = a * d
    pi = ctx.one - ad
    witness = nilpotency_index(a - a * ad, ctx)
    if witness is None:
        raise EngineError(f"residual of {a!r} is not nilpotent")
    if index is None:
        index = 0 if ctx.is_zero(pi) else witness
    return DrazinResult(d, index, pi, witness)


def _certify(a, d, ctx, what):
    if not is_drazin_pair(a, d, ctx):
        raise EngineError(f"{what}: result fails the Drazin axioms for {a!r}")


# -- matrices over a field ---------------------------------------------


def drazin_index(a: Matrix) -> int:
    """Least k >= 0 with rank(a^k) == rank(a^(k+1)), taking a^0 = I."""
    if not a.is_square:
        raise DimensionMismatch(f"index of a {a.rows}x{a.cols} matrix")
    if not a.domain.is_field:
        raise UnsupportedDomain(f"Drazin index needs a field, got {a.domain}")
    prev = a.rows
    power = a
    k = 0
    while True:
        r = rank(power)
        if r == prev:
            return k
        prev = r
        k += 1
        power = mat_mul(power, a)


@lru_cache(maxsize=8192)
def drazin(a: Matrix) -> DrazinResult:
    """Drazin inverse through the Fitting decomposition.

    With k = ind(a), the pivot columns U of a^k and the null-space basis V of
    a^k give S = [U V] with S^-1 a S = diag(C, N), C invertible and N
    nilpotent; then a^D = S diag(C^-1, 0) S^-1. The result is certified
    against the defining axioms before it is returned.
    """
    k = drazin_index(a)
    n = a.rows
    d = a.domain
    if k == 0:
        dinv = inverse(a)
    else:
        ak = mat_pow(a, k)
        u = column_space_basis(ak)
        r = u.cols
        if r == 0:
            dinv = zeros(n, n, d)
        else:
            s = hstack(u, null_space_basis(ak))
            s_inv = inverse(s)
            w = submatrix(s_inv, 0, r, 0, n)
            au = mat_mul(a, u)
            c = mat_mul(w, au)
            if not mat_mul(submatrix(s_inv, r, n, 0, n), au).is_zero():
                raise EngineError("Fitting blocks failed to separate")
            dinv = mat_mul(mat_mul(u, inverse(c)), w)
    ctx = MatrixRing(d, n)
    _certify(a, dinv, ctx, "drazin")
    return make_result(a, dinv, ctx, index=k)


def group_inverse(a: Matrix) -> Matrix:
    res = drazin(a)
    if res.index > 1:
        raise NoGroupInverse(f"index {res.index} > 1")
    return res.d


# -- scalar rings ------------------------------------------------------


def integer_drazin(a: int) -> DrazinResult:
    """Drazin inverse in Z: exists only for -1, 0 and 1."""
    if a not in (-1, 0, 1):
        raise NotDrazinInvertible(f"{a} is not Drazin invertible in Z")
    return DrazinResult(a, 0 if a else 1, 1 - a * a, 1)


def modular_drazin(x: ModularInt) -> DrazinResult:
    """Drazin inverse in Z_n by splitting n = u v with x nilpotent mod u and
    a unit mod v; a^D is 0 mod u and x^-1 mod v."""
    n = x.modulus
    v = n
    g = gcd(x.value, v)
    while g > 1:
        v //= g
        g = gcd(x.value, v)
    u = n // v
    if v == 1:
        dval = 0
    else:
        dval = pow(x.value, -1, v) * u * pow(u, -1, v) % n
    dres = ModularInt(dval, n)
    if u == 1:
        index = 0
    else:
        index, y = 1, x.value % u
        while y:
            y = y * x.value % u
            index += 1
    ctx = ModularRing(n)
    _certify(x, dres, ctx, "modular_drazin")
    return make_result(x, dres, ctx, index=index)


# -- oracle ------------------------------------------------------------


def brute_force_drazin(a, ctx: Optional[RingContext] = None, cap: int = DEFAULT_ENUMERATION_CAP) -> DrazinResult:
    """Exhaustive search for the Drazin inverse.

    Every element of ``ctx`` is tried against the three defining conditions.
    More than one hit means the uniqueness theorem (or this code) is broken
    and raises :class:`EngineError`.
    """
    ctx = ctx or context_of(a)
    if isinstance(ctx, MatrixRing) and not ctx.domain.is_field:
        raise UnsupportedDomain("brute force over matrix rings needs a finite field")
    if ctx.size is None or ctx.size > cap:
        raise ContextTooLarge(f"{ctx} has {ctx.size or 'infinitely many'} elements (cap {cap})")
    hits = [b for b in _elements_cached(ctx) if is_drazin_pair(a, b, ctx)]
    if not hits:
        raise NotDrazinInvertible(f"no Drazin inverse for {a!r} in {ctx}")
    if len(hits) > 1:
        raise EngineError(f"{len(hits)} Drazin inverses found for {a!r}")
    return make_result(a, hits[0], ctx)


_ELEMENT_CACHE: dict = {}


def _elements_cached(ctx):
    if isinstance(ctx, MatrixRing):
        key = (ctx.domain, ctx.n)
        if key not in _ELEMENT_CACHE:
            _ELEMENT_CACHE[key] = list(ctx.elements())
        return _ELEMENT_CACHE[key]
    return list(ctx.elements())


def drazin_of(x, ctx: Optional[RingContext] = None) -> DrazinResult:
    """Engine route in whatever context ``x`` lives in."""
    return (ctx or context_of(x)).drazin(x)


def is_drazin_invertible(x, ctx: Optional[RingContext] = None) -> bool:
    try:
        drazin_of(x, ctx)
    except NotDrazinInvertible:
        return False
    return True
