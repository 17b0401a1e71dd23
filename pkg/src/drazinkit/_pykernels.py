"""Pure-Python modular kernels; the reference for the compiled ``_kernels``.

Matrices are flat row-major sequences of ints already reduced mod ``p``.
"""


def matmul_mod(a, b, n, m, k, p):
    """``(n x m) @ (m x k)`` modulo ``p``; returns a list."""
    out = [0] * (n * k)
    bcols = [b[j::k] for j in range(k)]
    for i in range(n):
        row = a[i * m:(i + 1) * m]
        base = i * k
        for j in range(k):
            out[base + j] = sum(x * y for x, y in zip(row, bcols[j])) % p
    return out


def rref_mod(a, rows, cols, p, pivot_limit):
    """Reduced row-echelon form mod prime ``p``.

    Pivots are searched only in the first ``pivot_limit`` columns so an
    augmented block ``[A | B]`` rides along. Pivot choice is the first
    nonzero entry scanning down the column.

    Returns ``(reduced, pivots)`` with ``reduced`` a flat list.
    """
    m = [list(a[i * cols:(i + 1) * cols]) for i in range(rows)]
    pivots = []
    r = 0
    for c in range(pivot_limit):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            prow = m[r] = [x * inv % p for x in prow]
        for i in range(rows):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    m[i] = [(x - f * y) % p for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return [x for row in m for x in row], pivots


def rank_mod(a, rows, cols, p):
    """Rank mod prime ``p`` (forward elimination only)."""
    m = [list(a[i * cols:(i + 1) * cols]) for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = pow(prow[c], -1, p)
        for i in range(r + 1, rows):
            f = m[i][c]
            if f:
                f = f * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], prow)]
        r += 1
    return r
