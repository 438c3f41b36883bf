"""Polynomial ideals whose GF(q)-points are the isomorphisms or isotopisms A -> A'.

Variables are the entries of the unknown matrices (F for isomorphisms;
F, G, H for isotopisms).  Every ideal carries the field equations, which
make it zero-dimensional and radical, so its point count equals the number
of standard monomials of a Groebner basis.  Points are also counted by
direct enumeration for cross-checking.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .caps import DEFAULT_CAPS
from .evoalg import require_compatible
from .polyring import GREVLEX, INFINITE, Polynomial, PolyRing, buchberger, standard_monomial_count
from .linalg import perm_sign
from .search import ISOMORPHISM, ISOTOPISM, gl_array

GROEBNER = "groebner"
EXHAUSTIVE = "exhaustive"
LITERAL = "literal"
RABINOWITSCH = "rabinowitsch"


@dataclass(frozen=True)
class IdealSpec:
    relation: str
    ring: PolyRing
    groups: tuple          # per matrix: tuple of n*n variable indices, row-major
    structural: tuple      # generators encoding the map equations
    units: tuple           # determinant constraints
    field_equations: tuple
    left: object
    right: object
    encoding: str = LITERAL

    @property
    def generators(self):
        return self.structural + self.units + self.field_equations

    @property
    def field(self):
        return self.ring.field

    @property
    def n(self):
        return self.left.n

    def variables(self):
        return self.ring.names


def _var_name(letter, i, j, n):
    return f"{letter}{i + 1}{j + 1}" if n < 10 else f"{letter}{i + 1}_{j + 1}"


def _determinant(ring, idx, n):
    field = ring.field
    terms = {}
    for perm in permutations(range(n)):
        e = [0] * ring.nvars
        for i in range(n):
            e[idx[i * n + perm[i]]] += 1
        c = 1 if perm_sign(perm) > 0 else field.neg(1)
        terms[tuple(e)] = field.add(terms.get(tuple(e), 0), c)
    return Polynomial(ring, terms)


def _power_reduced(p, e):
    """p**e with every intermediate product reduced modulo the field equations."""
    result = p.ring.one()
    base = p.reduce_exponents()
    while e:
        if e & 1:
            result = (result * base).reduce_exponents()
        e >>= 1
        if e:
            base = (base * base).reduce_exponents()
    return result


def _unit_constraints(ring, groups, n, encoding):
    q = ring.field.q
    out = []
    for g, idx in enumerate(groups):
        det = _determinant(ring, idx, n)
        if encoding == RABINOWITSCH:
            u = ring.var(ring.nvars - len(groups) + g)
            out.append(u * det - 1)
        else:
            out.append(_power_reduced(det, q - 1) - 1)
    return out


def _build(relation, a, b, letters, encoding):
    require_compatible(a, b)
    if encoding not in (LITERAL, RABINOWITSCH):
        raise ValueError(f"unknown determinant encoding {encoding!r}")
    field, n = a.field, a.n
    names = [_var_name(L, i, j, n) for L in letters for i in range(n) for j in range(n)]
    if encoding == RABINOWITSCH:
        names += [f"u{L}" for L in letters]
    ring = PolyRing(field, names)
    groups = tuple(tuple(range(g * n * n, (g + 1) * n * n)) for g in range(len(letters)))
    return ring, groups


def _linear(ring, coeffs):
    """Sum of c * (product of variables) for (c, vars) pairs."""
    field = ring.field
    terms = {}
    for c, vs in coeffs:
        if not c:
            continue
        e = [0] * ring.nvars
        for v in vs:
            e[v] += 1
        e = tuple(e)
        terms[e] = field.add(terms.get(e, 0), c)
    return Polynomial(ring, terms)


def _structural(ring, a, b, fi, gi, hi, symmetric):
    """Coefficient equations of f(e_i) g(e_j) = h(e_i e_j)."""
    field, n = a.field, a.n
    t, tp = a.rows, b.rows
    gens = []
    for i in range(n):
        for j in range(n):
            if i == j or (symmetric and j < i):
                continue
            for l in range(n):
                p = _linear(ring, [(tp[k][l], (fi[i * n + k], gi[j * n + k])) for k in range(n)])
                if p:
                    gens.append(p)
    for i in range(n):
        for l in range(n):
            terms = [(tp[k][l], (fi[i * n + k], gi[i * n + k])) for k in range(n)]
            terms += [(field.neg(t[i][k]), (hi[k * n + l],)) for k in range(n)]
            p = _linear(ring, terms)
            if p:
                gens.append(p)
    return gens


def _dedupe(polys):
    seen, out = set(), []
    for p in polys:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return tuple(out)


def isom_ideal(a, b, encoding=LITERAL):
    """Ideal whose points are the matrices F of isomorphisms a -> b."""
    ring, groups = _build(ISOMORPHISM, a, b, "f", encoding)
    f = groups[0]
    structural = _structural(ring, a, b, f, f, f, symmetric=True)
    units = _unit_constraints(ring, groups, a.n, encoding)
    feqs = [ring.field_equation(i) for i in range(ring.nvars)]
    return IdealSpec(ISOMORPHISM, ring, groups, _dedupe(structural), tuple(units), tuple(feqs), a, b, encoding)


def isot_ideal(a, b, encoding=LITERAL):
    """Ideal whose points are the triples (F, G, H) of isotopisms a -> b."""
    ring, groups = _build(ISOTOPISM, a, b, "fgh", encoding)
    f, g, h = groups
    structural = _structural(ring, a, b, f, g, h, symmetric=False)
    units = _unit_constraints(ring, groups, a.n, encoding)
    feqs = [ring.field_equation(i) for i in range(ring.nvars)]
    return IdealSpec(ISOTOPISM, ring, groups, _dedupe(structural), tuple(units), tuple(feqs), a, b, encoding)


def make_ideal(relation, a, b, encoding=LITERAL):
    if relation == ISOMORPHISM:
        return isom_ideal(a, b, encoding)
    if relation == ISOTOPISM:
        return isot_ideal(a, b, encoding)
    raise ValueError(f"no ideal for relation {relation!r}")


def groebner_basis(ideal, order=GREVLEX, caps=None):
    return buchberger(list(ideal.generators), order, caps, ring=ideal.ring)


def count_groebner(ideal, order=GREVLEX, caps=None):
    count = standard_monomial_count(groebner_basis(ideal, order, caps))
    if count == INFINITE:  # impossible with field equations present
        raise AssertionError("ideal with field equations reported infinite")
    return count


def count_exhaustive(ideal, caps=None):
    """Count points by evaluating the map equations on every tuple of invertible matrices.

    Determinant constraints are checked as invertibility; any auxiliary
    inverse-determinant variables are determined by the matrices, so they
    do not change the count.
    """
    caps = caps or DEFAULT_CAPS
    field, n = ideal.field, ideal.n
    nmat = len(ideal.groups) * n * n
    caps.check("exhaustion", field.q ** nmat, ("method=groebner",))
    gl = gl_array(field, n, caps.replace(exhaustion=max(caps.exhaustion, field.q ** (n * n)))).reshape(-1, n * n)
    structural = ideal.structural
    r = len(ideal.groups)
    nvars = ideal.ring.nvars
    total = 0
    # chunk on the first matrix; the rest form a full product
    if r == 1:
        chunks = [gl]
        tail = np.zeros((1, 0), dtype=np.int64)
    else:
        idx = np.indices((len(gl),) * (r - 1)).reshape(r - 1, -1).T
        tail = np.concatenate([gl[idx[:, k]] for k in range(r - 1)], axis=1)
        chunks = [gl[i:i + 1] for i in range(len(gl))]
    for head in chunks:
        pts = np.zeros((len(head) * len(tail), nvars), dtype=np.int64)
        pts[:, :n * n] = np.repeat(head, len(tail), axis=0)
        if r > 1:
            pts[:, n * n:nmat] = np.tile(tail, (len(head), 1))
        ok = np.ones(len(pts), dtype=bool)
        for p in structural:
            ok &= p.evaluate_batch(pts) == 0
            if not ok.any():
                break
        total += int(ok.sum())
    return total


def count_points(ideal, method=GROEBNER, order=GREVLEX, caps=None):
    """Number of GF(q)-points of the ideal."""
    if method == GROEBNER:
        return count_groebner(ideal, order, caps)
    if method == EXHAUSTIVE:
        return count_exhaustive(ideal, caps)
    raise ValueError(f"unknown counting method {method!r}")


def count_record(ideal, method, count):
    return {
        "left": ideal.left.literal(),
        "right": ideal.right.literal(),
        "relation": ideal.relation,
        "method": method,
        "count": count,
    }
