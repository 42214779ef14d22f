"""Exact sparse linear algebra over Q (rows are dicts ``column -> mpq``)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from gmpy2 import mpq


def _q(x):
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class EchelonBasis:
    """Incrementally maintained reduced row echelon form.

    Rows are kept fully reduced against each other, so membership tests and
    normal forms are a single pass over the pivots.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot column -> row (pivot entry 1)

    def __len__(self):
        return len(self.rows)

    def reduce(self, row: dict) -> dict:
        row = {k: v for k, v in row.items() if v}
        for col in sorted(set(row) & self.rows.keys()):
            c = row.get(col)
            if not c:
                continue
            for k, v in self.rows[col].items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True when it enlarged the span."""
        row = self.reduce({k: _q(v) for k, v in row.items()})
        if not row:
            return False
        # a pivot may have been introduced by the reduction; repeat until stable
        while True:
            hit = set(row) & self.rows.keys()
            if not hit:
                break
            row = self.reduce(row)
            if not row:
                return False
        piv = min(row)
        inv = 1 / row[piv]
        row = {k: v * inv for k, v in row.items()}
        for p, other in self.rows.items():
            c = other.get(piv)
            if c:
                for k, v in row.items():
                    nv = other.get(k, 0) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.rows[piv] = row
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce({k: _q(v) for k, v in row.items()})

    def pivots(self) -> list:
        return sorted(self.rows)

    def sorted_rows(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form of a dense or sparse matrix.

    Returns ``(rows, pivots)`` with rows as dense Fraction lists when ``ncols``
    is known (or inferable from dense input).
    """
    sparse = []
    for r in rows:
        if isinstance(r, dict):
            sparse.append(r)
        else:
            ncols = len(r) if ncols is None else ncols
            sparse.append({j: v for j, v in enumerate(r) if v})
    E = EchelonBasis()
    for r in sparse:
        E.add(r)
    piv = E.pivots()
    if ncols is None:
        return E.sorted_rows(), piv
    dense = []
    for r in E.sorted_rows():
        dense.append([_frac(r[j]) if j in r else Fraction(0) for j in range(ncols)])
    return dense, piv


def rank(rows) -> int:
    E = EchelonBasis()
    for r in rows:
        E.add(r if isinstance(r, dict) else {j: v for j, v in enumerate(r) if v})
    return len(E)


def kernel_sparse(rows: list, ncols: int) -> list:
    """Right kernel of a sparse matrix, as sparse vectors in reduced echelon form."""
    E = EchelonBasis()
    for r in rows:
        E.add(r)
    pivots = set(E.rows)
    vecs = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: mpq(1)}
        for p, row in E.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    K = EchelonBasis()
    for v in vecs:
        K.add(v)
    return K.sorted_rows()


def linear_kernel(M) -> list[tuple]:
    """Basis of ``{v : M v = 0}`` in reduced row echelon form (Fraction tuples).

    ``M`` is a list of equal-length rows; an empty row list means the kernel
    is the whole space of dimension ``ncols`` which then cannot be inferred,
    so callers pass at least one (possibly zero) row.
    """
    if not M:
        return []
    ncols = len(M[0])
    rows = [{j: _q(v) for j, v in enumerate(r) if v} for r in M]
    out = []
    for v in kernel_sparse(rows, ncols):
        out.append(tuple(_frac(v[j]) if j in v else Fraction(0) for j in range(ncols)))
    return out


def integer_kernel(A, ncols: int | None = None) -> list[tuple]:
    """A Z-basis of ``{v in Z^n : A v = 0}`` for an integer matrix ``A``.

    Column operations bring ``A`` to echelon form while the same operations
    act on an identity matrix; the columns that end up zero give the basis.
    The basis is then size-reduced pairwise, which keeps entries small.
    """
    n = len(A[0]) if A else (ncols or 0)
    cols = [[int(A[r][c]) for r in range(len(A))] for c in range(n)]
    U = [[1 if i == c else 0 for i in range(n)] for c in range(n)]
    pos = 0
    for r in range(len(A)):
        if pos >= n:
            break
        while True:
            live = [c for c in range(pos, n) if cols[c][r]]
            if not live:
                break
            c0 = min(live, key=lambda c: abs(cols[c][r]))
            cols[pos], cols[c0] = cols[c0], cols[pos]
            U[pos], U[c0] = U[c0], U[pos]
            done = True
            for c in range(pos + 1, n):
                if cols[c][r]:
                    f = cols[c][r] // cols[pos][r]
                    cols[c] = [a - f * b for a, b in zip(cols[c], cols[pos])]
                    U[c] = [a - f * b for a, b in zip(U[c], U[pos])]
                    if cols[c][r]:
                        done = False
            if done:
                pos += 1
                break
    basis = [U[c] for c in range(pos, n)]
    return _size_reduce(basis)


def _size_reduce(basis):
    def norm(v):
        return sum(x * x for x in v)

    basis = [list(v) for v in basis]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                bj = basis[j]
                nj = norm(bj)
                f = round(sum(a * b for a, b in zip(basis[i], bj)) / nj)
                if f:
                    cand = [a - f * b for a, b in zip(basis[i], bj)]
                    if norm(cand) < norm(basis[i]):
                        basis[i] = cand
                        changed = True
    return sorted(tuple(v) for v in basis)


def unit_pivot_form(basis) -> tuple[list[tuple], list[int]]:
    """Unimodular row operations on a lattice basis making entries ``±1`` pivots.

    Returns ``(rows, pivots)``: ``rows[k][pivots[k]] = 1`` and every other row is
    zero in column ``pivots[k]``. Rows without a unit pivot come last. A column
    whose entries over the remaining rows have gcd 1 is turned into a pivot by
    Euclid's algorithm on those rows.
    """
    rows = [list(v) for v in basis]
    if not rows:
        return [], []
    n = len(rows[0])
    pivots: list[int] = []
    k = 0  # rows[:k] are done
    while k < len(rows):
        found = None
        for c in range(n):
            if c in pivots:
                continue
            hits = [r for r in range(k, len(rows)) if abs(rows[r][c]) == 1]
            if hits:
                found = (min(hits, key=lambda r: sum(map(abs, rows[r]))), c)
                break
        if found is None:
            for c in range(n):
                if c in pivots:
                    continue
                g = 0
                for r in range(k, len(rows)):
                    g = gcd(g, rows[r][c])
                if g == 1:
                    found = (_euclid_rows(rows, k, c), c)
                    break
        if found is None:
            break
        r, c = found
        rows[k], rows[r] = rows[r], rows[k]
        if rows[k][c] < 0:
            rows[k] = [-x for x in rows[k]]
        for s in range(len(rows)):
            if s != k and rows[s][c]:
                f = rows[s][c]
                rows[s] = [a - f * b for a, b in zip(rows[s], rows[k])]
        pivots.append(c)
        k += 1
    return [tuple(v) for v in rows], pivots


def _euclid_rows(rows, k, c) -> int:
    """Row operations on ``rows[k:]`` leaving one row with entry ``±gcd`` in column ``c``."""
    while True:
        live = [r for r in range(k, len(rows)) if rows[r][c]]
        piv = min(live, key=lambda r: abs(rows[r][c]))
        if len(live) == 1:
            return piv
        for r in live:
            if r != piv:
                f = rows[r][c] // rows[piv][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[piv])]
