"""Small dense linear algebra over GF(q) on integer codes.

Scalar routines take lists/tuples of rows.  The ``v*`` routines work on
numpy arrays with leading batch axes and are what the exhaustive searches
run on.
"""

from itertools import permutations, product

import numpy as np


def matmul(field, a, b):
    add, mul = field.add, field.mul
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = add(s, mul(x, y))
            out_row.append(s)
        out.append(tuple(out_row))
    return tuple(out)


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def rref(field, m):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in m]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(field, m):
    return len(rref(field, m)[1]) if m and len(m[0]) else 0


def det(field, m):
    rows = [list(r) for r in m]
    n = len(rows)
    d = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            d = field.neg(d)
        d = field.mul(d, rows[c][c])
        inv = field.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c]:
                f = field.mul(rows[i][c], inv)
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return d


def inverse(field, m):
    """Inverse matrix, or None when singular."""
    n = len(m)
    aug = [list(row) + list(e) for row, e in zip(m, identity(n))]
    rows, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        return None
    return tuple(tuple(r[n:]) for r in rows)


def nullspace(field, m, ncols):
    """Basis of {x : m x = 0} as a list of column vectors (tuples)."""
    rows, pivots = rref(field, m) if m else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [0] * ncols
        x[fcol] = 1
        for r, pc in enumerate(pivots):
            x[pc] = field.neg(rows[r][fcol])
        basis.append(tuple(x))
    return basis


def solve_affine(field, k, r):
    """Solve K X = R for a matrix X.

    Returns ``(particular, null_basis)`` where every solution is
    ``particular`` plus, independently in each column, any combination of
    ``null_basis``; returns ``(None, null_basis)`` when inconsistent.
    """
    nrows = len(k)
    ncols = len(k[0])
    rcols = len(r[0]) if r else 0
    aug = [list(k[i]) + list(r[i]) for i in range(nrows)]
    rows, pivots = rref(field, aug)
    null_basis = nullspace(field, k, ncols)
    if any(p >= ncols for p in pivots):
        return None, null_basis
    x = [[0] * rcols for _ in range(ncols)]
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][ncols:]
    return tuple(tuple(row) for row in x), null_basis


def affine_solutions(field, particular, null_basis):
    """Iterate every solution of an affine system returned by solve_affine.

    Solutions come out in increasing row-major code order when the null
    basis is in reduced form, which is not guaranteed; callers needing the
    minimum must take ``min`` themselves.
    """
    ncols = len(particular[0]) if particular else 0
    n = len(particular)
    q = field.q
    d = len(null_basis)
    for coeffs in product(range(q), repeat=d * ncols):
        x = [list(row) for row in particular]
        for col in range(ncols):
            for b, vec in enumerate(null_basis):
                a = coeffs[col * d + b]
                if a:
                    for i in range(n):
                        if vec[i]:
                            x[i][col] = field.add(x[i][col], field.mul(a, vec[i]))
        yield tuple(tuple(row) for row in x)


# -- batched (numpy) routines ---------------------------------------------

def vmatmul(field, a, b):
    """Batched matrix product over the field; broadcasting on leading axes."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if field.k == 1:
        return np.matmul(a, b) % field.p
    inner = a.shape[-1]
    out = None
    for t in range(inner):
        term = field.vmul(a[..., :, t:t + 1], b[..., t:t + 1, :])
        out = term if out is None else field.vadd(out, term)
    return out


def perm_sign(perm):
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def vdet(field, m):
    """Batched determinant by the Leibniz formula (n <= 4 in practice)."""
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[-1]
    pos = np.zeros(m.shape[:-2], dtype=np.int64)
    negs = np.zeros(m.shape[:-2], dtype=np.int64)
    for perm in permutations(range(n)):
        term = m[..., 0, perm[0]]
        for i in range(1, n):
            term = field.vmul(term, m[..., i, perm[i]])
        if perm_sign(perm) > 0:
            pos = field.vadd(pos, term)
        else:
            negs = field.vadd(negs, term)
    return field.vsub(pos, negs)


class BatchSolver:
    """Solve K X = R for one fixed K and a batch of right-hand sides R."""

    def __init__(self, field, k):
        self.field = field
        k = [list(r) for r in k]
        self.nrows = len(k)
        self.ncols = len(k[0])
        aug = [row + [int(i == j) for j in range(self.nrows)] for i, row in enumerate(k)]
        rows, pivots = rref(field, aug)
        self.pivots = [p for p in pivots if p < self.ncols]
        self.rank = len(self.pivots)
        # E with E K = rref(K)
        self.transform = np.array([row[self.ncols:] for row in rows], dtype=np.int64)
        self.null_basis = nullspace(field, k, self.ncols)

    def solve(self, r):
        """r has shape (B, nrows, c); returns (ok mask, particular (B, ncols, c))."""
        field = self.field
        y = vmatmul(field, self.transform, r)
        ok = np.all(y[:, self.rank:, :] == 0, axis=(1, 2))
        x = np.zeros((r.shape[0], self.ncols, r.shape[2]), dtype=np.int64)
        for i, pc in enumerate(self.pivots):
            x[:, pc, :] = y[:, i, :]
        return ok, x

    def null_combinations(self, ncolumns):
        """All additive offsets (as arrays of shape (ncols, ncolumns)) from the null space."""
        field = self.field
        d = len(self.null_basis)
        if d == 0:
            return np.zeros((1, self.ncols, ncolumns), dtype=np.int64)
        basis = np.array(self.null_basis, dtype=np.int64)  # (d, ncols)
        coeffs = np.array(list(product(range(field.q), repeat=d * ncolumns)), dtype=np.int64)
        coeffs = coeffs.reshape(-1, ncolumns, d)
        # offset[:, i, col] = sum_b coeffs[:, col, b] * basis[b, i]
        return vmatmul(field, coeffs, basis[None, :, :]).transpose(0, 2, 1)
