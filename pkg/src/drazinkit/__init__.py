"""Exact Drazin inverses and verified idempotent identities."""

from .engine import (
    DrazinResult,
    IntegerRing,
    MatrixRing,
    ModularRing,
    TableRing,
    brute_force_drazin,
    drazin,
    drazin_index,
    group_inverse,
    integer_drazin,
    is_drazin_pair,
    modular_drazin,
)
from .kernels import BACKEND
from .matrix import Matrix, diag, identity, inverse, mat_mul, mat_pow, zeros
from .scalars import GF, QQ, ZZ, Domain, ModularInt, PrimeFieldElem, Zn

__all__ = [
    "BACKEND",
    "Domain",
    "DrazinResult",
    "GF",
    "IntegerRing",
    "Matrix",
    "MatrixRing",
    "ModularInt",
    "ModularRing",
    "PrimeFieldElem",
    "QQ",
    "TableRing",
    "ZZ",
    "Zn",
    "brute_force_drazin",
    "diag",
    "drazin",
    "drazin_index",
    "group_inverse",
    "identity",
    "integer_drazin",
    "inverse",
    "is_drazin_pair",
    "mat_mul",
    "mat_pow",
    "modular_drazin",
    "zeros",
]
