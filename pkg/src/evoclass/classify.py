"""Partitioning evolution algebras into isomorphism or isotopism classes.

:func:`algorithm1` is the generic driver: repeatedly take the
enumeration-first unclassified algebra as a representative and sweep out
everything an oracle relates to it.  Oracles are exhaustive search,
Groebner point counts, or closed-form invariants for dimension two.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from . import linalg
from .caps import DEFAULT_CAPS
from .errors import CapExceededError, DimensionMismatchError, OracleError, ResourceLimitError
from .evoalg import (
    EvolutionAlgebra,
    annihilator_dim,
    derived_dim,
    enumerate_algebras,
    parse_tuple_notation,
    signature,
    transport_monomial,
)
from .gf import FieldSpec, unit_orbit_codes
from .ideals import count_points, make_ideal
from .polyring import GREVLEX
from .reference import REFERENCE_REPRESENTATIVES
from .search import (
    ISOMORPHISM,
    ISOTOPISM,
    STRONG_ISOTOPISM,
    MapTriple,
    find_witness,
    normalize_relation,
    related_algebras,
)

BRUTEFORCE = "bruteforce"
GROEBNER = "groebner"
INVARIANT = "invariant"
METHODS = (BRUTEFORCE, GROEBNER, INVARIANT)

# isotopism classes in dimension two
ABELIAN = "ABELIAN"
E1 = "E1"
E2 = "E2"
E5 = "E5"

# isomorphism families in dimension two
ANN1_DIAG = "ANN1_DIAG"
ANN1_NIL = "ANN1_NIL"
R1_SQCLASS = "R1_SQCLASS"
R1_EXCEPTIONAL = "R1_EXCEPTIONAL"
R2_A = "R2_A"
R2_B = "R2_B"
R2_C = "R2_C"
FAMILIES = (ABELIAN, ANN1_DIAG, ANN1_NIL, R1_SQCLASS, R1_EXCEPTIONAL, R2_A, R2_B, R2_C)

_ISOTOPISM_BY_SIGNATURE = {(2, 0): ABELIAN, (1, 1): E1, (0, 1): E2, (0, 2): E5}


def _require_2d(a):
    if a.n != 2:
        raise DimensionMismatchError(f"closed-form classification needs n = 2, got n = {a.n}")


# -- isotopism ---------------------------------------------------------------

def isotopism_class_2d(a):
    """ABELIAN, E1, E2 or E5 from (annihilator dim, derived dim)."""
    _require_2d(a)
    return _ISOTOPISM_BY_SIGNATURE[signature(a)]


def _permutation_matrix(perm):
    n = len(perm)
    return tuple(tuple(int(perm[i] == j) for j in range(n)) for i in range(n))


def strong_isotopy_normal_form(a):
    """Strongly isotopic algebra in normal form, with a witness (F, F, H) from a.

    In the result, a zero diagonal entry t_ii forces the whole block
    rows >= i, columns >= i to vanish, and a nonzero t_ii is the only
    nonzero entry of row i.
    """
    field, n = a.field, a.n
    t = [list(r) for r in a.rows]
    f_acc = linalg.identity(n)
    h_acc = linalg.identity(n)
    for i in range(n):
        pos = next(((r, c) for r in range(i, n) for c in range(i, n) if t[r][c]), None)
        if pos is None:
            break
        r, c = pos
        if (r, c) != (i, i):
            # permute components with f, relabel basis vectors with h
            alpha = list(range(n))
            alpha[i], alpha[r] = r, i
            beta = list(range(n))
            beta[i], beta[c] = c, i
            moved = [[0] * n for _ in range(n)]
            for x in range(n):
                for y in range(n):
                    moved[alpha[x]][beta[y]] = t[x][y]
            t = moved
            f_acc = linalg.matmul(field, f_acc, _permutation_matrix(alpha))
            h_acc = linalg.matmul(field, h_acc, _permutation_matrix(beta))
        if any(t[i][j] for j in range(n) if j != i):
            # h(e_i) = e_i - (1/t_ii) sum_{j != i} t_ij e_j clears row i
            inv = field.inv(t[i][i])
            hm = [list(r) for r in linalg.identity(n)]
            for j in range(n):
                if j != i:
                    hm[i][j] = field.neg(field.mul(inv, t[i][j]))
            t = [list(r) for r in linalg.matmul(field, t, hm)]
            h_acc = linalg.matmul(field, h_acc, hm)
    return EvolutionAlgebra(field, t), MapTriple(f_acc, f_acc, h_acc)


def satisfies_normal_form(a):
    """Check the two normal-form conditions literally."""
    n = a.n
    t = a.rows
    for i in range(n):
        if t[i][i] == 0:
            if any(t[j][k] for j in range(i, n) for k in range(i, n)):
                return False
        elif any(t[i][j] for j in range(n) if j != i):
            return False
    return True


# -- isomorphism labels ----------------------------------------------------

@dataclass(frozen=True)
class ClassLabel:
    family: str
    params: tuple = ()
    field: FieldSpec = dc_field(default=None, compare=False, repr=False)

    def __str__(self):
        if not self.params:
            return self.family
        enc = self.field.encode if self.field is not None else str
        return f"{self.family}(" + ",".join(enc(p) for p in self.params) + ")"


def head_normalization(a):
    """Monomial rescaling that turns row 1 into e1, e2 or e1+e2.

    Returns (head, transported algebra, scale).  Row 1 must be nonzero.
    """
    f = a.field
    x, y = a.rows[0]
    if x and not y:
        head, scale = "e1", (x, 1)
    elif y and not x:
        head, scale = "e2", (1, f.inv(y))
    else:
        head, scale = "e1+e2", (x, f.div(f.mul(x, x), y))
    return head, transport_monomial(a, (0, 1), scale), scale


def _square_class(field, c):
    return min(unit_orbit_codes(field, c, 2))


def r2c_involution(field, c, d):
    """(c, d) -> (c^2 / d^3, c / d^2)."""
    d2 = field.mul(d, d)
    return field.div(field.mul(c, c), field.mul(d2, d)), field.div(c, d2)


@lru_cache(maxsize=None)
def r2b_orbit(field, c, d):
    """Orbit of (c, d) under the moves that relate algebras (e2, c e1 + d e2)."""
    units = range(1, field.q)
    seen = {(c, d)}
    frontier = [(c, d)]
    while frontier:
        nxt = []
        for x, y in frontier:
            moves = []
            for m in units:
                m2 = field.mul(m, m)
                m3 = field.mul(m2, m)
                moves.append((field.div(x, m3), field.div(y, m2)))
                if y == 0:
                    moves.append((field.mul(field.mul(x, x), m3), 0))
            for mv in moves:
                if mv not in seen:
                    seen.add(mv)
                    nxt.append(mv)
        frontier = nxt
    return frozenset(seen)


def isomorphism_label_2d(a):
    """Complete isomorphism invariant of a two-dimensional evolution algebra."""
    _require_2d(a)
    field = a.field
    ann, der = annihilator_dim(a), derived_dim(a)
    if der == 0:
        return ClassLabel(ABELIAN, (), field)
    if ann == 1:
        r = 0 if any(a.rows[0]) else 1
        return ClassLabel(ANN1_DIAG if a.rows[r][r] else ANN1_NIL, (), field)
    head, b, _ = head_normalization(a)
    c, d = b.rows[1]
    if der == 1:
        if head == "e1":
            value = c
        elif head == "e2":
            value = d
        else:
            lam = c
            if lam == field.neg(1):
                return ClassLabel(R1_EXCEPTIONAL, (), field)
            s = field.add(lam, 1)
            value = field.mul(lam, field.mul(s, s))
        return ClassLabel(R1_SQCLASS, (_square_class(field, value),), field)
    if head == "e1":
        return ClassLabel(R2_A, (field.div(c, field.mul(d, d)),), field)
    if head == "e2":
        return ClassLabel(R2_B, min(r2b_orbit(field, c, d)), field)
    if c == 0:
        # (e1+e2, d e2) is isomorphic to (e1, d e1 + e2)
        return ClassLabel(R2_A, (d,), field)
    if d == 0:
        # (e1+e2, c e1) is isomorphic to (e2, (1/c)(e1 + e2))
        ic = field.inv(c)
        return ClassLabel(R2_B, min(r2b_orbit(field, ic, ic)), field)
    return ClassLabel(R2_C, min((c, d), r2c_involution(field, c, d)), field)


# -- explicit isomorphisms between normal forms ----------------------------------

@dataclass(frozen=True)
class Reduction:
    name: str
    source: EvolutionAlgebra
    target: EvolutionAlgebra
    f: tuple


def _alg(field, rows):
    return EvolutionAlgebra(field, rows)


def reduction_witnesses(field):
    """Every explicit normal-form isomorphism, instantiated for all valid parameters."""
    F = field
    units = range(1, F.q)
    elems = range(F.q)
    neg1 = F.neg(1)
    inv, mul, div = F.inv, F.mul, F.div

    def sq(x):
        return mul(x, x)

    for c in units:
        for m in units:
            yield Reduction("r1_square_scaling", _alg(F, ((1, 0), (c, 0))),
                            _alg(F, ((1, 0), (mul(c, sq(m)), 0))), ((1, 0), (0, inv(m))))
    for c in units:
        yield Reduction("r1_head_swap", _alg(F, ((1, 0), (c, 0))),
                        _alg(F, ((0, 1), (0, c))), ((0, inv(c)), (1, 0)))
    for c in units:
        if c == neg1:
            continue
        s = F.add(c, 1)
        yield Reduction("r1_head_sum", _alg(F, ((1, 0), (mul(c, sq(s)), 0))),
                        _alg(F, ((1, 1), (c, c))), ((inv(s), inv(s)), (F.neg(c), 1)))
    for d in units:
        yield Reduction("r2_e1_pure", _alg(F, ((1, 0), (0, d))), _alg(F, ((1, 0), (0, 1))), ((0, 1), (d, 0)))
        yield Reduction("r2_sum_to_e1", _alg(F, ((1, 0), (d, 1))), _alg(F, ((1, 1), (0, d))), ((0, inv(d)), (1, 0)))
    for c in units:
        for m in units:
            m2 = sq(m)
            yield Reduction("r2_e2_square_cube", _alg(F, ((0, 1), (mul(sq(c), mul(m2, m)), 0))),
                            _alg(F, ((0, 1), (c, 0))), ((0, m), (mul(c, m2), 0)))
    for c in units:
        ic = inv(c)
        yield Reduction("r2_sum_to_e2", _alg(F, ((0, 1), (ic, ic))), _alg(F, ((1, 1), (c, 0))), ((0, ic), (ic, 0)))
    for c in units:
        for d in units:
            if c == d:
                continue
            g, dl = r2c_involution(F, c, d)
            yield Reduction("r2_sum_involution", _alg(F, ((1, 1), (c, d))), _alg(F, ((1, 1), (g, dl))),
                            ((0, div(sq(d), c)), (d, 0)))
    for c in elems:
        for d in units:
            for dl in units:
                g = div(mul(c, sq(dl)), sq(d))
                yield Reduction("r2_e1_scaling", _alg(F, ((1, 0), (c, d))), _alg(F, ((1, 0), (g, dl))),
                                ((1, 0), (0, div(d, dl))))
    for c in units:
        for d in elems:
            for m in units:
                m2 = sq(m)
                yield Reduction("r2_e2_scaling", _alg(F, ((0, 1), (c, d))),
                                _alg(F, ((0, 1), (div(c, mul(m2, m)), div(d, m2)))), ((m, 0), (0, m2)))


# -- partitions ------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraClass:
    representative: EvolutionAlgebra
    members: tuple

    @property
    def size(self):
        return len(self.members)


@dataclass
class Partition:
    relation: str
    method: str
    classes: list

    @property
    def class_count(self):
        return len(self.classes)

    def __len__(self):
        return len(self.classes)

    def representatives(self):
        return [c.representative for c in self.classes]

    def as_sets(self):
        return frozenset(frozenset(c.members) for c in self.classes)

    def class_index(self):
        return {m: i for i, c in enumerate(self.classes) for m in c.members}

    def label_for(self, a):
        if a.n != 2:
            return None
        if self.relation == ISOMORPHISM:
            return str(isomorphism_label_2d(a))
        return isotopism_class_2d(a)

    def report(self, members=False, timing_ms=None):
        first = self.classes[0].representative if self.classes else None
        out = {
            "q": first.field.q if first else None,
            "n": first.n if first else None,
            "relation": self.relation,
            "method": self.method,
            "class_count": self.class_count,
            "classes": [],
        }
        for c in self.classes:
            rec = {
                "representative": c.representative.literal(),
                "tuple": c.representative.tuple_notation(),
                "label": self.label_for(c.representative),
                "size": c.size,
            }
            if members:
                rec["members"] = [m.literal() for m in c.members]
            out["classes"].append(rec)
        if timing_ms is not None:
            out["timing_ms"] = timing_ms
        return out


class Oracle:
    """Pairwise relation test used by :func:`algorithm1`."""

    method = None

    def __init__(self, relation, caps=None):
        self.relation = normalize_relation(relation)
        self.caps = caps or DEFAULT_CAPS

    def related(self, a, b):
        raise NotImplementedError

    def members(self, rep, candidates):
        """Candidates related to rep (rep itself is candidates[0])."""
        out = [rep]
        for b in candidates[1:]:
            try:
                hit = self.related(rep, b)
            except (CapExceededError, ResourceLimitError) as exc:
                raise OracleError(rep.literal(), b.literal(), exc) from exc
            if hit:
                out.append(b)
        return out


class BruteForceOracle(Oracle):
    method = BRUTEFORCE

    def related(self, a, b):
        return a == b or find_witness(a, b, self.relation, self.caps) is not None

    def members(self, rep, candidates):
        # the related set of rep, computed once, answers every pairwise query
        try:
            orbit = related_algebras(rep, self.relation, self.caps)
        except (CapExceededError, ResourceLimitError) as exc:
            raise OracleError(rep.literal(), "*", exc) from exc
        return [rep] + [b for b in candidates[1:] if b in orbit]


def _groebner_related(args):
    relation, a, b, order, caps = args
    return count_points(make_ideal(relation, a, b), "groebner", order, caps) > 0


class GroebnerOracle(Oracle):
    method = GROEBNER

    def __init__(self, relation, caps=None, order=GREVLEX, workers=1):
        super().__init__(relation, caps)
        if self.relation == STRONG_ISOTOPISM:
            raise ValueError("no Groebner ideal for strong isotopism; use method=bruteforce")
        self.order = order
        self.workers = max(1, int(workers))

    def _check(self, a):
        if self.relation == ISOTOPISM:
            self.caps.check("isotopism_q", a.field.q, ("method=invariant (n=2)",))

    def related(self, a, b):
        self._check(a)
        return _groebner_related((self.relation, a, b, self.order, self.caps))

    def members(self, rep, candidates):
        if self.workers == 1 or len(candidates) < 8:
            return super().members(rep, candidates)
        self._check(rep)
        jobs = [(self.relation, rep, b, self.order, self.caps) for b in candidates[1:]]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            try:
                hits = list(pool.map(_groebner_related, jobs, chunksize=max(1, len(jobs) // (4 * self.workers))))
            except (CapExceededError, ResourceLimitError) as exc:
                raise OracleError(rep.literal(), "*", exc) from exc
        return [rep] + [b for b, hit in zip(candidates[1:], hits) if hit]


class InvariantOracle(Oracle):
    method = INVARIANT

    def __init__(self, relation, caps=None):
        super().__init__(relation, caps)
        if self.relation == STRONG_ISOTOPISM:
            raise ValueError("no closed-form invariant for strong isotopism; use method=bruteforce")

    def key(self, a):
        if self.relation == ISOMORPHISM:
            return isomorphism_label_2d(a)
        return isotopism_class_2d(a)

    def related(self, a, b):
        return self.key(a) == self.key(b)

    def members(self, rep, candidates):
        k = self.key(rep)
        return [rep] + [b for b in candidates[1:] if self.key(b) == k]


def make_oracle(relation, method, caps=None, order=GREVLEX, workers=1):
    relation = normalize_relation(relation)
    if method == BRUTEFORCE:
        return BruteForceOracle(relation, caps)
    if method == GROEBNER:
        return GroebnerOracle(relation, caps, order, workers)
    if method == INVARIANT:
        return InvariantOracle(relation, caps)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def algorithm1(algebras, oracle):
    """Partition algebras into classes of the oracle's relation.

    The first remaining algebra in enumeration order becomes a
    representative; every remaining algebra related to it joins its class.
    """
    remaining = sorted(set(algebras), key=lambda a: a.index)
    classes = []
    while remaining:
        rep = remaining[0]
        members = oracle.members(rep, remaining)
        taken = set(members)
        classes.append(AlgebraClass(rep, tuple(members)))
        remaining = [a for a in remaining if a not in taken]
    return Partition(oracle.relation, oracle.method, classes)


def classify(field, n=2, relation=ISOMORPHISM, method=BRUTEFORCE, caps=None, order=GREVLEX, workers=1):
    """Partition of every n-dimensional evolution algebra over the field."""
    caps = caps or DEFAULT_CAPS
    if method == INVARIANT and n != 2:
        raise DimensionMismatchError("the invariant method covers n = 2 only")
    oracle = make_oracle(relation, method, caps, order, workers)
    return algorithm1(enumerate_algebras(field, n, caps), oracle)


def timed_classify(*args, **kwargs):
    start = time.perf_counter()
    part = classify(*args, **kwargs)
    return part, round((time.perf_counter() - start) * 1000, 1)


def class_counts(field, relation=ISOMORPHISM, method=BRUTEFORCE, caps=None, n=2):
    return classify(field, n, relation, method, caps).class_count


# -- reference representatives ------------------------------------------------

def reference_algebras(field):
    return [parse_tuple_notation(field, s) for s in REFERENCE_REPRESENTATIVES[field.q]]


def match_reference(partition, field):
    """Compare a partition with the reference representative list for GF(q).

    ``ok`` means every class holds exactly one listed representative.
    """
    listed = reference_algebras(field)
    where = partition.class_index()
    by_class = {}
    for a in listed:
        by_class.setdefault(where[a], []).append(a)
    shared = [[a.tuple_notation() for a in group] for group in by_class.values() if len(group) > 1]
    uncovered = [i for i in range(partition.class_count) if i not in by_class]
    return {
        "q": field.q,
        "listed": len(listed),
        "computed": partition.class_count,
        "shared_classes": shared,
        "uncovered_classes": [partition.classes[i].representative.tuple_notation() for i in uncovered],
        "ok": not shared and not uncovered and len(listed) == partition.class_count,
    }


def adjudicate_reference(field, partition=None, caps=None):
    """Resolve discrepancies between the reference list and the computed partition.

    Listed representatives sharing a class are shown isomorphic by an
    explicit witness; classes with no listed representative are shown to
    be isomorphic to none of the listed algebras by exhaustive search.
    """
    if partition is None:
        partition = classify(field, 2, ISOMORPHISM, BRUTEFORCE, caps)
    listed = reference_algebras(field)
    match = match_reference(partition, field)
    where = partition.class_index()
    merged = []
    seen = {}
    for a in listed:
        k = where[a]
        if k in seen:
            b = seen[k]
            w = find_witness(b, a, ISOMORPHISM, caps)
            merged.append({"listed": [b.tuple_notation(), a.tuple_notation()],
                           "witness_F": w.to_dict(field)["F"] if w else None})
        else:
            seen[k] = a
    missing = []
    for i, cls in enumerate(partition.classes):
        if i in seen:
            continue
        rep = cls.representative
        distinct = all(find_witness(rep, b, ISOMORPHISM, caps) is None for b in listed)
        missing.append({"representative": rep.tuple_notation(), "label": str(isomorphism_label_2d(rep)),
                        "size": cls.size, "isomorphic_to_no_listed_algebra": distinct})
    lines = [f"q={field.q}: computed {partition.class_count} classes, {len(listed)} listed representatives"]
    for m in merged:
        f_text = "; ".join(",".join(row) for row in m["witness_F"]) if m["witness_F"] else "?"
        lines.append(f"  listed {m['listed'][0]} maps onto listed {m['listed'][1]} by the isomorphism F = [{f_text}]")
    for m in missing:
        proof = "exhaustive search finds no isomorphism to any listed algebra" if m["isomorphic_to_no_listed_algebra"] else "UNRESOLVED"
        lines.append(f"  class of {m['representative']} [{m['label']}, {m['size']} algebras] has no listed representative; {proof}")
    if not merged and not missing:
        lines.append("  listed representatives match the computed partition exactly")
    return {"q": field.q, "match": match, "merged": merged, "missing": missing, "text": "\n".join(lines)}
