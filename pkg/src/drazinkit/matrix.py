"""Dense exact matrices and the field linear algebra the Drazin engine needs.

A :class:`Matrix` is an immutable value. ``*`` and ``@`` are the ring
product (as in sympy), ``+``/``-`` with a plain scalar act through the
identity, so ring formulas keep their algebraic shape::

    F = p * d            # product
    one_minus_q = 1 - q  # I - q

Modular products and elimination go through :mod:`drazinkit.kernels`;
rationals and integers use generic Python arithmetic.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from . import kernels
from .errors import (
    DimensionMismatch,
    DomainMismatch,
    Inconsistent,
    NotSquare,
    ParseError,
    Singular,
    UnsupportedDomain,
)
from .scalars import Domain, Kind

MAX_FILE_DIM = 64


class Matrix:
    """Row-major exact matrix over a :class:`~drazinkit.scalars.Domain`."""

    __slots__ = ("rows", "cols", "entries", "domain", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable, domain: Domain):
        if rows < 0 or cols < 0:
            raise DimensionMismatch(f"negative shape {rows}x{cols}")
        entries = tuple(domain.coerce(x) for x in entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self.domain = domain
        self._hash = None

    @classmethod
    def _make(cls, rows, cols, entries, domain):
        # entries must already be a tuple of canonical native scalars
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.entries = entries
        m.domain = domain
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain: Domain) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, (x for r in rows for x in r), domain)

    # -- basic access --------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[list]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def to_strings(self) -> List[List[str]]:
        """Entries as scalar literals, row by row (JSON serialization)."""
        return [[str(x) for x in row] for row in self.to_rows()]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self.is_square and self == identity(self.rows, self.domain)

    @property
    def T(self) -> "Matrix":
        return transpose(self)

    # -- arithmetic ----------------------------------------------------

    def _check_same(self, other: "Matrix"):
        if self.domain != other.domain:
            raise DomainMismatch(f"{self.domain} vs {other.domain}")
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def _through_identity(self, c) -> "Matrix":
        if not self.is_square:
            raise NotSquare("scalar + matrix needs a square matrix")
        return scalar_matrix(self.rows, c, self.domain)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            other = self._through_identity(other)
        self._check_same(other)
        if self.domain.is_modular:
            p = self.domain.modulus
            ent = tuple((x + y) % p for x, y in zip(self.entries, other.entries))
        else:
            ent = tuple(map(operator.add, self.entries, other.entries))
        return Matrix._make(self.rows, self.cols, ent, self.domain)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            other = self._through_identity(other)
        self._check_same(other)
        if self.domain.is_modular:
            p = self.domain.modulus
            ent = tuple((x - y) % p for x, y in zip(self.entries, other.entries))
        else:
            ent = tuple(map(operator.sub, self.entries, other.entries))
        return Matrix._make(self.rows, self.cols, ent, self.domain)

    def __rsub__(self, other):
        return self._through_identity(other) - self

    def __neg__(self):
        if self.domain.is_modular:
            p = self.domain.modulus
            ent = tuple(-x % p for x in self.entries)
        else:
            ent = tuple(-x for x in self.entries)
        return Matrix._make(self.rows, self.cols, ent, self.domain)

    def scale(self, c) -> "Matrix":
        c = self.domain.coerce(c)
        if self.domain.is_modular:
            p = self.domain.modulus
            ent = tuple(x * c % p for x in self.entries)
        else:
            ent = tuple(x * c for x in self.entries)
        return Matrix._make(self.rows, self.cols, ent, self.domain)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __pow__(self, e: int):
        if e < 0:
            return mat_pow(inverse(self), -e)
        return mat_pow(self, e)

    # -- value semantics -----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.domain == other.domain
            and self.entries == other.entries
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.domain, self.entries))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.to_strings()}, {self.domain})"

    def __str__(self):
        return "\n".join(" ".join(r) for r in self.to_strings())


# -- constructors ------------------------------------------------------


@lru_cache(maxsize=256)
def identity(n: int, domain: Domain) -> Matrix:
    z, o = domain.zero, domain.one
    return Matrix._make(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)), domain)


def zeros(rows: int, cols: int, domain: Domain) -> Matrix:
    return Matrix._make(rows, cols, (domain.zero,) * (rows * cols), domain)


def scalar_matrix(n: int, c, domain: Domain) -> Matrix:
    c = domain.coerce(c)
    z = domain.zero
    return Matrix._make(n, n, tuple(c if i == j else z for i in range(n) for j in range(n)), domain)


def diag(values: Sequence, domain: Domain) -> Matrix:
    n = len(values)
    vals = [domain.coerce(v) for v in values]
    z = domain.zero
    return Matrix._make(n, n, tuple(vals[i] if i == j else z for i in range(n) for j in range(n)), domain)


def hstack(*mats: Matrix) -> Matrix:
    rows = mats[0].rows
    domain = mats[0].domain
    for m in mats:
        if m.rows != rows:
            raise DimensionMismatch("hstack needs equal row counts")
        if m.domain != domain:
            raise DomainMismatch(f"{domain} vs {m.domain}")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.entries[i * m.cols:(i + 1) * m.cols])
    return Matrix._make(rows, sum(m.cols for m in mats), tuple(out), domain)


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    if a.domain != b.domain:
        raise DomainMismatch(f"{a.domain} vs {b.domain}")
    z = a.domain.zero
    out = []
    for i in range(a.rows):
        out.extend(a.entries[i * a.cols:(i + 1) * a.cols])
        out.extend((z,) * b.cols)
    for i in range(b.rows):
        out.extend((z,) * a.cols)
        out.extend(b.entries[i * b.cols:(i + 1) * b.cols])
    return Matrix._make(a.rows + b.rows, a.cols + b.cols, tuple(out), a.domain)


def submatrix(a: Matrix, r0: int, r1: int, c0: int, c1: int) -> Matrix:
    """Rows ``r0:r1`` and columns ``c0:c1``."""
    ent = []
    for i in range(r0, r1):
        ent.extend(a.entries[i * a.cols + c0:i * a.cols + c1])
    return Matrix._make(r1 - r0, c1 - c0, tuple(ent), a.domain)


# -- ring operations ---------------------------------------------------


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.domain != b.domain:
        raise DomainMismatch(f"{a.domain} vs {b.domain}")
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.shape} @ {b.shape}")
    n, m, k = a.rows, a.cols, b.cols
    d = a.domain
    if d.is_modular:
        ent = tuple(kernels.matmul_mod(a.entries, b.entries, n, m, k, d.modulus))
    else:
        zero = d.zero
        ae, be = a.entries, b.entries
        bcols = [be[j::k] for j in range(k)]
        ent = tuple(
            sum(map(operator.mul, ae[i * m:(i + 1) * m], col), zero)
            for i in range(n)
            for col in bcols
        )
    return Matrix._make(n, k, ent, d)


def mat_pow(a: Matrix, e: int) -> Matrix:
    """``a**e`` by repeated squaring; ``a**0`` is the identity."""
    if not a.is_square:
        raise NotSquare(f"power of a {a.rows}x{a.cols} matrix")
    if e < 0:
        raise ValueError("negative exponent")
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return identity(a.rows, a.domain) if result is None else result


def transpose(a: Matrix) -> Matrix:
    r, c = a.rows, a.cols
    ent = a.entries
    return Matrix._make(c, r, tuple(ent[i * c + j] for j in range(c) for i in range(r)), a.domain)


# -- elimination -------------------------------------------------------


@dataclass(frozen=True)
class RrefResult:
    reduced: Matrix
    rank: int
    pivots: Tuple[int, ...]
    transform: Matrix


def _require_field(d: Domain):
    if not d.is_field:
        raise UnsupportedDomain(f"elimination needs a field; {d} is not one")


def _rref_entries(entries, rows, cols, pivot_limit, d: Domain):
    """Field RREF of a flat row-major block; pivots restricted to the first
    ``pivot_limit`` columns. Returns ``(flat entries, pivots)``."""
    if d.kind is Kind.PRIME_FIELD:
        return kernels.rref_mod(entries, rows, cols, d.modulus, pivot_limit)
    m = [list(entries[i * cols:(i + 1) * cols]) for i in range(rows)]
    pivots = []
    r = 0
    for c in range(pivot_limit):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        prow = m[r] = [x / lead for x in m[r]] if lead != 1 else m[r]
        for i in range(rows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return [x for row in m for x in row], pivots


def rref_rank(a: Matrix) -> RrefResult:
    """Reduced row-echelon form with the accumulated row operations.

    ``transform @ a == reduced``. Pivoting takes the first nonzero entry in
    each column; no magnitude pivoting is needed in exact arithmetic.
    """
    _require_field(a.domain)
    aug = hstack(a, identity(a.rows, a.domain))
    flat, pivots = _rref_entries(aug.entries, aug.rows, aug.cols, a.cols, a.domain)
    whole = Matrix._make(aug.rows, aug.cols, tuple(flat), a.domain)
    reduced = submatrix(whole, 0, a.rows, 0, a.cols)
    transform = submatrix(whole, 0, a.rows, a.cols, aug.cols)
    return RrefResult(reduced, len(pivots), tuple(pivots), transform)


def rank(a: Matrix) -> int:
    _require_field(a.domain)
    if a.domain.kind is Kind.PRIME_FIELD:
        return kernels.rank_mod(a.entries, a.rows, a.cols, a.domain.modulus)
    return len(_rref_entries(a.entries, a.rows, a.cols, a.cols, a.domain)[1])


def solve_right(a: Matrix, b: Matrix) -> Matrix:
    """Some ``X`` with ``a @ X == b``; free variables are set to zero.

    Raises :class:`Inconsistent` when no solution exists.
    """
    _require_field(a.domain)
    if a.domain != b.domain:
        raise DomainMismatch(f"{a.domain} vs {b.domain}")
    if a.rows != b.rows:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    aug = hstack(a, b)
    w = aug.cols
    flat, pivots = _rref_entries(aug.entries, aug.rows, w, a.cols, a.domain)
    r = len(pivots)
    for i in range(r, a.rows):
        if any(flat[i * w + a.cols:(i + 1) * w]):
            raise Inconsistent("a @ X = b has no solution")
    z = a.domain.zero
    x = [z] * (a.cols * b.cols)
    for i, c in enumerate(pivots):
        x[c * b.cols:(c + 1) * b.cols] = flat[i * w + a.cols:(i + 1) * w]
    return Matrix._make(a.cols, b.cols, tuple(x), a.domain)


def inverse(a: Matrix) -> Matrix:
    if not a.is_square:
        raise NotSquare(f"inverse of a {a.rows}x{a.cols} matrix")
    _require_field(a.domain)
    n = a.rows
    aug = hstack(a, identity(n, a.domain))
    flat, pivots = _rref_entries(aug.entries, n, 2 * n, n, a.domain)
    if len(pivots) < n:
        raise Singular("matrix is singular")
    whole = Matrix._make(n, 2 * n, tuple(flat), a.domain)
    return submatrix(whole, 0, n, n, 2 * n)


def column_space_basis(a: Matrix) -> Matrix:
    """The pivot columns of ``a`` in index order (``a.rows x rank``)."""
    _require_field(a.domain)
    _, pivots = _rref_entries(a.entries, a.rows, a.cols, a.cols, a.domain)
    ent = tuple(a.entries[i * a.cols + c] for i in range(a.rows) for c in pivots)
    return Matrix._make(a.rows, len(pivots), ent, a.domain)


def null_space_basis(a: Matrix) -> Matrix:
    """Standard free-variable basis of ``null(a)`` (``a.cols x nullity``)."""
    _require_field(a.domain)
    flat, pivots = _rref_entries(a.entries, a.rows, a.cols, a.cols, a.domain)
    d = a.domain
    pivset = set(pivots)
    free = [c for c in range(a.cols) if c not in pivset]
    vecs = []
    for f in free:
        v = [d.zero] * a.cols
        v[f] = d.one
        for i, c in enumerate(pivots):
            x = flat[i * a.cols + f]
            if x:
                v[c] = (-x) % d.modulus if d.is_modular else -x
        vecs.append(v)
    ent = tuple(vecs[j][i] for i in range(a.cols) for j in range(len(free)))
    return Matrix._make(a.cols, len(free), ent, d)


# -- text format -------------------------------------------------------


def parse_matrix_text(text: str, max_dim: int = MAX_FILE_DIM) -> Matrix:
    """Parse the matrix file format.

    Line 1 is the domain tag (``Q``, ``GF 7``, ``Zn 12``, ``Z``), line 2 is
    ``<rows> <cols>``, then one line of scalar literals per row. Blank lines
    and ``#`` comments are skipped.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) < 2:
        raise ParseError("expected a domain line and a dimension line")
    domain = Domain.from_tag(lines[0])
    dims = lines[1].split()
    if len(dims) != 2:
        raise ParseError(f"bad dimension line {lines[1]!r}")
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError:
        raise ParseError(f"bad dimension line {lines[1]!r}") from None
    if not (1 <= rows <= max_dim and 1 <= cols <= max_dim):
        raise ParseError(f"dimensions must lie in 1..{max_dim}, got {rows}x{cols}")
    body = lines[2:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} rows, found {len(body)}")
    entries = []
    for k, line in enumerate(body):
        toks = line.split()
        if len(toks) != cols:
            raise ParseError(f"row {k + 1}: expected {cols} entries, found {len(toks)}")
        entries.extend(domain.parse(t) for t in toks)
    return Matrix._make(rows, cols, tuple(entries), domain)


def format_matrix_text(a: Matrix) -> str:
    return f"{a.domain.file_tag}\n{a.rows} {a.cols}\n{a}\n"
