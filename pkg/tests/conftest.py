import pytest

from drazinkit import GF, QQ, Matrix, MatrixRing
from drazinkit.calculus import IdempotentPair


def mat(rows, domain=QQ):
    return Matrix.from_rows(rows, domain)


@pytest.fixture
def pair_a():
    """p = [[1,0],[1,0]], q = diag(0,1) over Q: pq = 0, p - q squares to I."""
    p = mat([[1, 0], [1, 0]])
    q = mat([[0, 0], [0, 1]])
    return IdempotentPair(p, q, MatrixRing(QQ, 2))


@pytest.fixture
def diag_pair():
    from drazinkit import diag

    return IdempotentPair(diag([1, 1, 0], QQ), diag([1, 0, 0], QQ), MatrixRing(QQ, 3))


@pytest.fixture
def gf7():
    return GF(7)
