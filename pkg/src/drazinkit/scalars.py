"""Exact scalar domains: the rationals, prime fields GF(p), Z_n and Z.

Matrices keep their entries in a *native* representation chosen per domain
so the inner loops stay cheap:

* ``Q``        -> :data:`Rational` (``gmpy2.mpq``, or ``fractions.Fraction``
  when gmpy2 is missing or ``DRAZINKIT_PURE_PYTHON`` is set)
* ``GF(p)``    -> ``int`` in ``[0, p)``
* ``Z_n``      -> ``int`` in ``[0, n)``
* ``Z``        -> ``int``

:class:`ModularInt` / :class:`PrimeFieldElem` are the boxed scalar types used
when a residue has to travel on its own (scalar ring contexts, the CLI).
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from .errors import InvalidDomain, NotAUnit, ParseError, ZeroDenominator

if os.environ.get("DRAZINKIT_PURE_PYTHON"):
    Rational = Fraction
else:
    try:
        from gmpy2 import mpq as Rational
    except ImportError:
        Rational = Fraction

_RATIONAL_TYPES = (Fraction, type(Rational(0)))

# Deterministic Miller-Rabin witnesses; correct for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Raises :class:`InvalidDomain` above the range where the fixed witness set
    is proven to be exact, rather than falling back to a probabilistic answer.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise InvalidDomain(f"cannot certify primality of {n} deterministically")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def normalize_rational(num: int, den: int):
    """Canonical rational ``num/den``: positive denominator, lowest terms."""
    if den == 0:
        raise ZeroDenominator(f"{num}/0")
    return Rational(num, den)


class Kind(enum.Enum):
    RATIONALS = "Q"
    PRIME_FIELD = "GF"
    MODULAR = "Zn"
    INTEGERS = "Z"


@dataclass(frozen=True)
class Domain:
    """Which exact scalar structure is in force.

    Use the factories :func:`GF`, :func:`Zn` and the constants :data:`QQ`,
    :data:`ZZ` rather than calling the constructor directly; they validate
    the modulus.
    """

    kind: Kind
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind in (Kind.RATIONALS, Kind.INTEGERS):
            if self.modulus is not None:
                raise InvalidDomain(f"{self.kind.value} takes no modulus")
            return
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise InvalidDomain(f"modulus must be an integer >= 2, got {self.modulus!r}")
        if self.kind is Kind.PRIME_FIELD and not is_prime(self.modulus):
            raise InvalidDomain(f"GF({self.modulus}): modulus is not prime")

    # -- structure -----------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in (Kind.RATIONALS, Kind.PRIME_FIELD)

    @property
    def is_modular(self) -> bool:
        return self.kind in (Kind.PRIME_FIELD, Kind.MODULAR)

    @property
    def characteristic(self) -> int:
        return self.modulus if self.is_modular else 0

    @property
    def size(self) -> Optional[int]:
        """Number of elements, or None for infinite domains."""
        return self.modulus if self.is_modular else None

    def elements(self) -> Iterator:
        if not self.is_modular:
            raise InvalidDomain(f"{self} is infinite")
        return iter(range(self.modulus))

    # -- native values -------------------------------------------------

    @property
    def zero(self):
        return Rational(0) if self.kind is Kind.RATIONALS else 0

    @property
    def one(self):
        return Rational(1) if self.kind is Kind.RATIONALS else 1

    def coerce(self, x):
        """Bring ``x`` into this domain's native representation."""
        if isinstance(x, ModularInt):
            if not self.is_modular or x.modulus != self.modulus:
                raise InvalidDomain(f"{x!r} does not belong to {self}")
            return x.value
        if self.kind is Kind.RATIONALS:
            if isinstance(x, (int, *_RATIONAL_TYPES)):
                return Rational(x)
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, _RATIONAL_TYPES):
            if x.denominator != 1:
                if not self.is_modular:
                    raise TypeError(f"{x} is not an integer")
                return int(x.numerator) * invert_scalar(int(x.denominator), self) % self.modulus
            x = int(x.numerator)
        if not isinstance(x, int):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        return x % self.modulus if self.is_modular else x

    def box(self, x):
        """Native value -> standalone scalar object."""
        if self.kind is Kind.PRIME_FIELD:
            return PrimeFieldElem(x, self.modulus)
        if self.kind is Kind.MODULAR:
            return ModularInt(x, self.modulus)
        return x

    def inv(self, x):
        return invert_scalar(x, self)

    # -- text syntax ---------------------------------------------------

    def parse(self, text: str):
        text = text.strip()
        try:
            if "/" in text:
                if self.kind is not Kind.RATIONALS:
                    raise ParseError(f"rational literal {text!r} not allowed in {self}")
                num, den = text.split("/")
                if int(den) <= 0:
                    raise ParseError(f"denominator must be positive in {text!r}")
                return normalize_rational(int(num), int(den))
            value = int(text)
        except ValueError:
            raise ParseError(f"bad scalar literal {text!r}") from None
        if self.is_modular and not 0 <= value < self.modulus:
            raise ParseError(f"{value} is not reduced mod {self.modulus}")
        return self.coerce(value)

    def format(self, x) -> str:
        return str(x)

    @property
    def file_tag(self) -> str:
        """Header line used by the matrix text format (``GF 7``)."""
        if self.modulus is None:
            return self.kind.value
        return f"{self.kind.value} {self.modulus}"

    @property
    def tag(self) -> str:
        """CLI spelling (``GF:7``)."""
        if self.modulus is None:
            return self.kind.value
        return f"{self.kind.value}:{self.modulus}"

    @classmethod
    def from_tag(cls, text: str) -> "Domain":
        """Parse ``Q``, ``Z``, ``GF:7``/``GF 7`` or ``Zn:12``/``Zn 12``."""
        parts = text.replace(":", " ").split()
        if not parts:
            raise ParseError("empty domain tag")
        head, rest = parts[0], parts[1:]
        if head in ("Q", "Z") and not rest:
            return QQ if head == "Q" else ZZ
        if head in ("GF", "Zn") and len(rest) == 1:
            try:
                modulus = int(rest[0])
            except ValueError:
                raise ParseError(f"bad modulus in domain tag {text!r}") from None
            return GF(modulus) if head == "GF" else Zn(modulus)
        raise ParseError(f"unknown domain tag {text!r}")

    def __str__(self):
        if self.kind is Kind.PRIME_FIELD:
            return f"GF({self.modulus})"
        if self.kind is Kind.MODULAR:
            return f"Z_{self.modulus}"
        return self.kind.value


QQ = Domain(Kind.RATIONALS)
ZZ = Domain(Kind.INTEGERS)


def GF(p: int) -> Domain:
    return Domain(Kind.PRIME_FIELD, p)


def Zn(n: int) -> Domain:
    return Domain(Kind.MODULAR, n)


class ModularInt:
    """A residue class modulo ``modulus``; immutable."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        if modulus < 2:
            raise InvalidDomain(f"modulus must be >= 2, got {modulus}")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", value % modulus)

    def __setattr__(self, name, value):
        raise AttributeError("ModularInt is immutable")

    def _make(self, value):
        return type(self)(value, self.modulus)

    def _other(self, other):
        if isinstance(other, ModularInt):
            if other.modulus != self.modulus:
                raise InvalidDomain(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else self._make(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else self._make(self.value - v)

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else self._make(v - self.value)

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else self._make(self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self._make(pow(invert_scalar(self, None), -e, self.modulus))
        return self._make(pow(self.value, e, self.modulus))

    def __eq__(self, other):
        if isinstance(other, ModularInt):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{type(self).__name__}({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


class PrimeFieldElem(ModularInt):
    """Element of GF(p); the modulus is checked for primality."""

    __slots__ = ()

    def __init__(self, value: int, modulus: int):
        if not is_prime(modulus):
            raise InvalidDomain(f"GF({modulus}): modulus is not prime")
        super().__init__(value, modulus)

    def _make(self, value):
        # skip the primality check on derived values
        out = object.__new__(PrimeFieldElem)
        object.__setattr__(out, "modulus", self.modulus)
        object.__setattr__(out, "value", value % self.modulus)
        return out

    def __truediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return self._make(self.value * invert_scalar(v % self.modulus, GF(self.modulus)))


def invert_scalar(x, d: Optional[Domain]):
    """Multiplicative inverse of ``x`` in ``d``.

    ``x`` may be native or boxed; boxed inputs give boxed outputs and ``d``
    may then be None.
    """
    if isinstance(x, ModularInt):
        dom = d or (GF(x.modulus) if isinstance(x, PrimeFieldElem) else Zn(x.modulus))
        return x._make(invert_scalar(x.value, dom))
    if d is None:
        raise TypeError("a domain is required for native scalars")
    if d.kind is Kind.RATIONALS:
        if x == 0:
            raise NotAUnit("0 has no inverse in Q")
        return 1 / Rational(x)
    if d.kind is Kind.INTEGERS:
        if x not in (1, -1):
            raise NotAUnit(f"{x} is not a unit in Z")
        return x
    n = d.modulus
    x %= n
    if gcd(x, n) != 1:
        raise NotAUnit(f"{x} is not a unit in {d}")
    return pow(x, -1, n)


def is_nilpotent_scalar(x, d: Optional[Domain] = None) -> bool:
    """True iff some power of ``x`` vanishes in ``d``.

    For Z_n this strips common factors with gcd until either n is exhausted
    (every prime of n divides x) or a coprime remainder is left.
    """
    if isinstance(x, ModularInt):
        x, n = x.value, x.modulus
    elif d is not None and d.is_modular:
        n = d.modulus
        x %= n
    else:
        return x == 0
    m = n
    while m > 1:
        g = gcd(x, m)
        if g == 1:
            return False
        m //= g
    return True
