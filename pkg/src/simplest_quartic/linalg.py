"""Exact integer and F_p linear algebra on short row vectors.

Normal form convention: rows generate the lattice, the matrix is upper
triangular with positive diagonal, and each entry above a pivot is reduced
into [0, pivot).
"""

from __future__ import annotations

from fractions import Fraction

Matrix = tuple[tuple[int, ...], ...]


def hnf(rows, ncols: int | None = None) -> Matrix:
    """Hermite normal form of a full-rank row lattice."""
    a = [list(r) for r in rows if any(r)]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    out = []
    for j in range(ncols):
        live = [r for r in a if r[j]]
        rest = [r for r in a if not r[j]]
        if not live:
            raise ValueError(f"lattice is not of full rank (column {j})")
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[j]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[j] // piv[j]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[j] else rest).append(r)
            live = nxt
        piv = live[0]
        if piv[j] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        a = [r for r in rest if any(r)]
    # reduce entries above each pivot
    for j in range(ncols):
        d = out[j][j]
        for i in range(j):
            q = out[i][j] // d
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[j])]
    return tuple(tuple(r) for r in out)


def det_upper(m: Matrix) -> int:
    d = 1
    for i, row in enumerate(m):
        d *= row[i]
    return d


def solve_upper(m: Matrix, target) -> list[Fraction]:
    """Row vector y with y * m = target, for upper-triangular m."""
    n = len(m)
    y: list[Fraction] = []
    for j in range(n):
        s = Fraction(target[j]) - sum((y[i] * m[i][j] for i in range(j)), Fraction(0))
        y.append(s / m[j][j])
    return y


def solve_upper_int(m: Matrix, target) -> list[int] | None:
    """Integral solution of y * m = target, or None if y is not integral."""
    n = len(m)
    t = list(target)
    y = []
    for j in range(n):
        q, r = divmod(t[j], m[j][j])
        if r:
            return None
        y.append(q)
        if q:
            row = m[j]
            for k in range(j, n):
                t[k] -= q * row[k]
    return y


def reduce_mod_lattice(m: Matrix, v) -> tuple[int, ...]:
    """Canonical representative of v modulo the row lattice of an HNF m."""
    v = list(v)
    for j, row in enumerate(m):
        q = v[j] // row[j]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


# -- F_p ----------------------------------------------------------------


def rref_mod_p(rows, p: int) -> list[list[int]]:
    """Reduced row echelon basis of the row space over F_p."""
    a = [[x % p for x in r] for r in rows]
    a = [r for r in a if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    basis: list[list[int]] = []
    for col in range(ncols):
        piv = next((i for i, r in enumerate(a) if r[col]), None)
        if piv is None:
            continue
        r = a.pop(piv)
        inv = pow(r[col], -1, p)
        r = [x * inv % p for x in r]
        for k, b in enumerate(basis):
            if b[col]:
                c = b[col]
                basis[k] = [(x - c * y) % p for x, y in zip(b, r)]
        a = [[(x - rr[col] * y) % p for x, y in zip(rr, r)] for rr in a]
        a = [rr for rr in a if any(rr)]
        basis.append(r)
    return basis


def rank_mod_p(rows, p: int) -> int:
    return len(rref_mod_p(rows, p))


def left_kernel_mod_p(rows, p: int) -> list[list[int]]:
    """Basis of {v : v * A = 0 over F_p} where A has the given rows."""
    n = len(rows)
    if n == 0:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [1 if i == k else 0 for k in range(n)] for i, r in enumerate(rows)]
    red = rref_mod_p(aug, p)
    return [r[ncols:] for r in red if not any(r[:ncols])]


def right_kernel_mod_p(rows, p: int, ncols: int) -> list[list[int]]:
    """Basis of {x : A * x = 0 over F_p}; A has ``ncols`` columns."""
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    cols = list(zip(*rows))
    return left_kernel_mod_p([list(c) for c in cols], p)


def mat_mul_mod_p(a, b, p: int) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]
