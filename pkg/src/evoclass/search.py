"""Exhaustive witness search over invertible matrices.

Maps are row-matrices: ``f(e_i) = sum_j F[i][j] e'_j``.  A triple (F, G, H)
is an isotopism A -> A' when f(e_i) g(e_j) = h(e_i e_j) for all basis pairs;
F = G gives a strong isotopism and F = G = H an isomorphism.

The searches enumerate GL(n, q) in row-major code order and return the
first witness in that order, so results are reproducible.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import linalg
from .caps import DEFAULT_CAPS
from .errors import SingularMapError
from .evoalg import EvolutionAlgebra, basis_vector, multiply, require_compatible

ISOMORPHISM = "isomorphism"
STRONG_ISOTOPISM = "strong_isotopism"
ISOTOPISM = "isotopism"
RELATIONS = (ISOMORPHISM, STRONG_ISOTOPISM, ISOTOPISM)

_CAP_FOR = {
    ISOMORPHISM: "isomorphism_q",
    STRONG_ISOTOPISM: "strong_isotopism_q",
    ISOTOPISM: "isotopism_q",
}
_ALTERNATIVES = {
    ISOMORPHISM: ("method=invariant (n=2)", "method=groebner"),
    STRONG_ISOTOPISM: ("method=invariant for the isotopism partition (n=2)",),
    ISOTOPISM: ("method=invariant (n=2)", "method=groebner (q <= 3)"),
}


def normalize_relation(name):
    key = name.strip().lower().replace("-", "_")
    if key not in RELATIONS:
        raise ValueError(f"unknown relation {name!r}; expected one of {', '.join(RELATIONS)}")
    return key


@dataclass(frozen=True)
class MapTriple:
    f: tuple
    g: tuple
    h: tuple

    @classmethod
    def isomorphism(cls, f):
        return cls(f, f, f)

    @classmethod
    def strong(cls, f, h):
        return cls(f, f, h)

    def compose(self, other, field):
        """self followed by other (maps compose as row-matrix products)."""
        return MapTriple(
            linalg.matmul(field, self.f, other.f),
            linalg.matmul(field, self.g, other.g),
            linalg.matmul(field, self.h, other.h),
        )

    def inverse(self, field):
        parts = [linalg.inverse(field, m) for m in (self.f, self.g, self.h)]
        if any(p is None for p in parts):
            raise SingularMapError("cannot invert a singular map")
        return MapTriple(*parts)

    def to_dict(self, field):
        enc = field.encode
        return {name: [[enc(x) for x in row] for row in m] for name, m in zip("FGH", (self.f, self.g, self.h))}


def _as_tuple(m):
    return tuple(tuple(int(x) for x in row) for row in m)


def check_search_cap(field, n, relation, caps=None):
    caps = caps or DEFAULT_CAPS
    caps.check(_CAP_FOR[relation], field.q, _ALTERNATIVES[relation])
    caps.check("exhaustion", field.q ** (n * n), _ALTERNATIVES[relation])


# -- GL(n, q) ------------------------------------------------------------------

def gl_chunks(field, n, caps=None):
    """Invertible n x n matrices as numpy chunks (m, n, n), in enumeration order.

    Chunks are grouped by the first row so memory stays at q^(n(n-1)) rows.
    """
    caps = caps or DEFAULT_CAPS
    q = field.q
    caps.check("exhaustion", q ** (n * n))
    rest = np.array(list(product(range(q), repeat=n * (n - 1))), dtype=np.int64).reshape(-1, n - 1, n)
    for first in product(range(q), repeat=n):
        if not any(first):
            continue
        top = np.broadcast_to(np.array(first, dtype=np.int64), (rest.shape[0], 1, n))
        mats = np.concatenate([top, rest], axis=1)
        mats = mats[linalg.vdet(field, mats) != 0]
        if len(mats):
            yield mats


@lru_cache(maxsize=32)
def _gl_array(field, n):
    return np.concatenate(list(gl_chunks(field, n, DEFAULT_CAPS.replace(exhaustion=field.q ** (n * n)))))


def gl_array(field, n, caps=None):
    """All of GL(n, q) as one (N, n, n) array (cached)."""
    caps = caps or DEFAULT_CAPS
    caps.check("exhaustion", field.q ** (n * n))
    arr = _gl_array(field, n)
    arr.setflags(write=False)
    return arr


def gl_enumerate(field, n, caps=None):
    """Yield every invertible matrix (tuple of row tuples) once, in row-major order."""
    for chunk in gl_chunks(field, n, caps):
        for m in chunk:
            yield _as_tuple(m)


# -- verification ----------------------------------------------------------

def apply_map(field, m, v):
    """Image of the coordinate vector v under the row-matrix map m."""
    return linalg.matmul(field, (tuple(v),), m)[0]


def verify_isotopism(a, b, t):
    """True iff (F, G, H) is an isotopism from a to b, checked on all basis pairs."""
    require_compatible(a, b)
    field, n = a.field, a.n
    for name, m in zip("FGH", (t.f, t.g, t.h)):
        if len(m) != n or any(len(r) != n for r in m):
            raise SingularMapError(f"{name} is not {n}x{n}")
        if linalg.det(field, m) == 0:
            raise SingularMapError(f"{name} is not invertible")
    for i in range(n):
        for j in range(n):
            lhs = multiply(b, t.f[i], t.g[j])
            prod = multiply(a, basis_vector(n, i), basis_vector(n, j))
            if lhs != apply_map(field, t.h, prod):
                return False
    return True


def verify_isomorphism(a, b, f):
    return verify_isotopism(a, b, MapTriple.isomorphism(_as_tuple(f)))


# -- vectorized constraint evaluation --------------------------------------

def _pair_products(field, fs, gs, target):
    """lhs[b, i, j, l] = sum_k F[b,i,k] G[b,j,k] T'[k,l]."""
    p = field.vmul(fs[:, :, None, :], gs[:, None, :, :])  # (B, i, j, k)
    return linalg.vmatmul(field, p, target)


def _offdiag_zero(lhs, n):
    mask = ~np.eye(n, dtype=bool)
    return np.all(lhs[:, mask, :] == 0, axis=(1, 2))


def _diag(lhs, n):
    idx = np.arange(n)
    return lhs[:, idx, idx, :]  # (B, n, l)


def _row_major_min(mats):
    flat = mats.reshape(len(mats), -1)
    order = np.lexsort(flat.T[::-1])
    return mats[order[0]]


def _first_invertible_h(field, solver, particular, n):
    """Smallest invertible H among particular + null-space offsets, or None."""
    if solver.null_basis:
        cands = field.vadd(particular[None, :, :], solver.null_combinations(n))
    else:
        cands = particular[None, :, :]
    cands = cands[linalg.vdet(field, cands) != 0]
    if not len(cands):
        return None
    return _row_major_min(cands)


def find_witness(a, b, relation=ISOMORPHISM, caps=None):
    """First witness (in enumeration order) that a and b are related, or None."""
    relation = normalize_relation(relation)
    require_compatible(a, b)
    field, n = a.field, a.n
    check_search_cap(field, n, relation, caps)
    t = a.array()
    tp = b.array()
    if relation == ISOMORPHISM:
        for fs in gl_chunks(field, n, caps):
            lhs = _pair_products(field, fs, fs, tp)
            ok = _offdiag_zero(lhs, n) & np.all(_diag(lhs, n) == linalg.vmatmul(field, t, fs), axis=(1, 2))
            hits = np.nonzero(ok)[0]
            if len(hits):
                return MapTriple.isomorphism(_as_tuple(fs[hits[0]]))
        return None
    solver = linalg.BatchSolver(field, t)
    gl = gl_array(field, n, caps)
    for fs in gl_chunks(field, n, caps):
        for f in fs:
            gs = f[None] if relation == STRONG_ISOTOPISM else gl
            fb = np.broadcast_to(f, gs.shape)
            lhs = _pair_products(field, fb, gs, tp)
            good = _offdiag_zero(lhs, n)
            if not good.any():
                continue
            ok, xs = solver.solve(_diag(lhs, n))
            for bidx in np.nonzero(good & ok)[0]:
                h = _first_invertible_h(field, solver, xs[bidx], n)
                if h is not None:
                    return MapTriple(_as_tuple(f), _as_tuple(gs[bidx]), _as_tuple(h))
    return None


def related(a, b, relation=ISOMORPHISM, caps=None):
    return find_witness(a, b, relation, caps) is not None


# -- whole related sets ------------------------------------------------------

def _coefficient_matrix(field, f, g, n, symmetric):
    """Rows (i, j) of the linear system in T'; diagonal rows first."""
    pairs = [(i, i) for i in range(n)]
    pairs += [(i, j) for i in range(n) for j in range(n) if i != j and (not symmetric or i < j)]
    k = [tuple(field.mul(int(f[i][c]), int(g[j][c])) for c in range(n)) for i, j in pairs]
    return k, len(pairs)


def related_algebras(a, relation=ISOMORPHISM, caps=None):
    """Every algebra related to a, mapped to its first witness.

    For each candidate map (F, or F with H, or F, G, H) the constraints on the
    target structure matrix are linear, so all targets a map realizes are
    obtained by solving that system rather than by scanning targets.
    """
    relation = normalize_relation(relation)
    field, n = a.field, a.n
    check_search_cap(field, n, relation, caps)
    t = a.rows
    out = {}
    q = field.q
    weights = np.array([q ** (n * n - 1 - i) for i in range(n * n)], dtype=np.int64)

    if relation == ISOMORPHISM:
        for f in gl_enumerate(field, n, caps):
            k, m = _coefficient_matrix(field, f, f, n, True)
            tf = linalg.matmul(field, t, f)
            r = [tf[i] for i in range(n)] + [(0,) * n] * (m - n)
            part, null = linalg.solve_affine(field, k, r)
            if part is None:
                continue
            for sol in linalg.affine_solutions(field, part, null):
                if sol not in out:
                    out[sol] = MapTriple.isomorphism(f)
        return {EvolutionAlgebra(field, k): v for k, v in out.items()}

    gl = gl_array(field, n, caps)
    th = linalg.vmatmul(field, np.array(t, dtype=np.int64), gl)  # (B, n, n): T H
    seen = {}
    gl_list = list(gl_enumerate(field, n, caps))
    for fi, f in enumerate(gl_list):
        g_iter = [(fi, f)] if relation == STRONG_ISOTOPISM else enumerate(gl_list)
        for gi, g in g_iter:
            k, m = _coefficient_matrix(field, f, g, n, relation == STRONG_ISOTOPISM)
            solver = linalg.BatchSolver(field, k)
            r = np.zeros((len(gl), m, n), dtype=np.int64)
            r[:, :n, :] = th
            ok, xs = solver.solve(r)
            hs = np.nonzero(ok)[0]
            if not len(hs):
                continue
            offsets = solver.null_combinations(n)
            sols = field.vadd(xs[hs][:, None, :, :], offsets[None, :, :, :])  # (H, O, n, n)
            codes = (sols.reshape(len(hs), -1, n * n) * weights).sum(axis=2)
            flat_codes = codes.reshape(-1)
            uniq, first = np.unique(flat_codes, return_index=True)
            for code, pos in zip(uniq.tolist(), first.tolist()):
                if code not in seen:
                    h_idx = hs[pos // codes.shape[1]]
                    seen[code] = MapTriple(f, g, _as_tuple(gl[h_idx]))
    return {EvolutionAlgebra.from_index(field, n, code): v for code, v in seen.items()}
