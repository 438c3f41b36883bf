"""Sparse multivariate polynomials over GF(q) and reduced Groebner bases.

The public :class:`Polynomial` keeps a dict from exponent tuples to
nonzero coefficient codes.  Buchberger's algorithm runs on a packed form:
each monomial becomes one integer whose integer order *is* the monomial
order, so comparison, multiplication and divisibility are single big-int
operations.
"""

import heapq
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .caps import DEFAULT_CAPS
from .errors import ParseError, ResourceLimitError, RingMismatchError, ZeroPolynomialError
from .evoalg import split_top
from .gf import FieldElement

INFINITE = "infinite"

_W = 16                 # bits per packed field
_GUARD = 1 << (_W - 1)  # guard bit of each field
_BIAS = 1 << (_W - 2)   # grevlex stores BIAS - e


class MonomialOrder:
    """lex or grevlex, with an optional variable priority (highest first)."""

    TAGS = ("grevlex", "lex")

    def __init__(self, tag="grevlex", var_order=None):
        if tag not in self.TAGS:
            raise ValueError(f"unknown monomial order {tag!r}")
        self.tag = tag
        self.var_order = tuple(var_order) if var_order is not None else None

    def _perm(self, exps):
        return exps if self.var_order is None else tuple(exps[i] for i in self.var_order)

    def key(self, exps):
        e = self._perm(exps)
        if self.tag == "lex":
            return e
        return (sum(e),) + tuple(-x for x in reversed(e))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.tag, self.var_order) == (other.tag, other.var_order)

    def __hash__(self):
        return hash((self.tag, self.var_order))

    def __repr__(self):
        return self.tag if self.var_order is None else f"{self.tag}{self.var_order}"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def order_from_name(name):
    return MonomialOrder(name)


class PolyRing:
    def __init__(self, field, names):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.names)
        self._index = {name: i for i, name in enumerate(self.names)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.field, self.names) == (other.field, other.names)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}]"

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = self.field.code(c) if not isinstance(c, int) else c % self.field.q if c >= 0 else self.field.from_int(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name):
        i = self._index[name] if isinstance(name, str) else name
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def field_equation(self, i):
        """x_i^q - x_i."""
        q = self.field.q
        e1 = [0] * self.nvars
        eq = [0] * self.nvars
        e1[i] = 1
        eq[i] = q
        return Polynomial(self, {tuple(eq): 1, tuple(e1): self.field.neg(1)})

    def index(self, name):
        return self._index[name]

    def parse(self, text):
        return parse_polynomial(self, text)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to codes."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, FieldElement)):
            if isinstance(other, FieldElement):
                return self.ring.constant(self.ring.field.code(other))
            return self.ring.constant(self.ring.field.from_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        add = self.ring.field.add
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = add(out.get(e, 0), c)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.ring.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = f.add(out.get(e, 0), f.mul(c1, c2))
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        mul = self.ring.field.mul
        return Polynomial(self.ring, {e: mul(c, v) for e, v in self.terms.items()})

    def reduce_exponents(self):
        """Rewrite x^e as x^(((e-1) mod (q-1)) + 1), i.e. reduce modulo all x^q - x."""
        q1 = self.ring.field.q - 1
        add = self.ring.field.add
        out = {}
        for e, c in self.terms.items():
            r = tuple(0 if x == 0 else (x - 1) % q1 + 1 for x in e)
            out[r] = add(out.get(r, 0), c)
        return Polynomial(self.ring, out)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def leading_monomial(self, order=GREVLEX):
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order=GREVLEX):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order=GREVLEX):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def evaluate(self, point):
        f = self.ring.field
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = f.mul(v, f.pow(x, k))
            total = f.add(total, v)
        return total

    def evaluate_batch(self, points):
        """Evaluate at every row of an (N, nvars) code array."""
        f = self.ring.field
        points = np.asarray(points, dtype=np.int64)
        out = np.zeros(points.shape[0], dtype=np.int64)
        powers = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = points[:, i] if k == 1 else f.vmul(power(i, k - 1), points[:, i])
            return powers[(i, k)]

        for e, c in self.terms.items():
            v = np.full(points.shape[0], c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    v = f.vmul(v, power(i, k))
            out = f.vadd(out, v)
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.constant(self.ring.field.from_int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def to_str(self, order=GREVLEX):
        if not self.terms:
            return "0"
        f = self.ring.field
        parts = []
        for e in sorted(self.terms, key=order.key, reverse=True):
            c = self.terms[e]
            factors = []
            for name, k in zip(self.ring.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if c != 1 or not factors:
                factors.insert(0, f.encode(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_polynomial(ring, text):
    """Parse ``c*x1^a1*...`` terms joined by + or -."""
    field = ring.field
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    terms = []
    cur, depth = "", 0
    for ch in s:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur not in ("", "-"):
            terms.append(cur)
            cur = "-" if ch == "-" else ""
        elif ch == "+" and depth == 0:
            continue
        else:
            cur += ch
    terms.append(cur)
    result = ring.zero()
    for term in terms:
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if not term:
            raise ParseError(f"dangling sign in {text!r}")
        coef = 1
        exps = [0] * ring.nvars
        for factor in split_top(term, "*"):
            m = _FACTOR.match(factor)
            if m:
                name, k = m.group(1), int(m.group(2) or 1)
                if name not in ring.names:
                    raise ParseError(f"unknown variable {name!r}")
                exps[ring.index(name)] += k
            else:
                coef = field.mul(coef, field.parse(factor))
        if sign < 0:
            coef = field.neg(coef)
        result = result + Polynomial(ring, {tuple(exps): coef})
    return result


# -- packed monomials ----------------------------------------------------------

class _Packer:
    """Bijection between exponent tuples and order-preserving integers."""

    def __init__(self, nvars, order):
        self.nvars = nvars
        self.order = order
        self.perm = order.var_order or tuple(range(nvars))
        self.grevlex = order.tag == "grevlex"
        nf = nvars
        self.var_mask_guard = sum(_GUARD << (_W * i) for i in range(nf))
        if self.grevlex:
            # fields, most significant first: deg, BIAS - e[perm[n-1]], ..., BIAS - e[perm[0]]
            self.shift = {self.perm[n]: _W * n for n in range(nvars)}
            self.bias = sum(_BIAS << (_W * i) for i in range(nf))
            self.deg_shift = _W * nf
        else:
            # fields, most significant first: e[perm[0]], ..., e[perm[n-1]]
            self.shift = {self.perm[n]: _W * (nvars - 1 - n) for n in range(nvars)}
            self.bias = 0
            self.deg_shift = None
        self._unpack_cache = {}
        self.one = self.pack((0,) * nvars)

    def pack(self, e):
        if self.grevlex:
            v = sum(e) << self.deg_shift
            for i, x in enumerate(e):
                v |= (_BIAS - x) << self.shift[i]
            return v
        v = 0
        for i, x in enumerate(e):
            v |= x << self.shift[i]
        return v

    def unpack(self, m):
        e = self._unpack_cache.get(m)
        if e is None:
            mask = (1 << _W) - 1
            if self.grevlex:
                e = tuple(_BIAS - ((m >> self.shift[i]) & mask) for i in range(self.nvars))
            else:
                e = tuple((m >> self.shift[i]) & mask for i in range(self.nvars))
            self._unpack_cache[m] = e
        return e

    def mul(self, a, b):
        return a + b - self.bias

    def div(self, a, b):
        return a - b + self.bias

    def divides(self, b, a):
        """True iff monomial b divides monomial a."""
        if self.grevlex:
            return ((b + self.var_mask_guard - a) & self.var_mask_guard) == self.var_mask_guard
        return ((a + self.var_mask_guard - b) & self.var_mask_guard) == self.var_mask_guard

    def lcm(self, a, b):
        return self.pack(tuple(max(x, y) for x, y in zip(self.unpack(a), self.unpack(b))))

    def coprime(self, a, b):
        return all(x == 0 or y == 0 for x, y in zip(self.unpack(a), self.unpack(b)))

    def degree(self, a):
        if self.grevlex:
            return a >> self.deg_shift
        return sum(self.unpack(a))


def _to_packed(poly, packer):
    return sorted(((packer.pack(e), c) for e, c in poly.terms.items()), reverse=True)


def _from_packed(ring, packed, packer):
    return Polynomial(ring, {packer.unpack(m): c for m, c in packed})


class _Engine:
    """Arithmetic on packed polynomials (lists of (monomial, coeff), descending)."""

    def __init__(self, field, packer):
        self.field = field
        self.packer = packer

    def monic(self, f):
        if not f or f[0][1] == 1:
            return f
        inv = self.field.inv(f[0][1])
        mul = self.field.mul
        return [(m, mul(inv, c)) for m, c in f]

    def sub_scaled(self, f, start, c, mono, g):
        """f[start:] - c * mono * g, merged in descending order."""
        field = self.field
        mul, sub, neg = field.mul, field.sub, field.neg
        off = mono - self.packer.bias
        out = []
        i, j, nf, ng = start, 0, len(f), len(g)
        while i < nf and j < ng:
            mf = f[i][0]
            mg = g[j][0] + off
            if mf > mg:
                out.append(f[i])
                i += 1
            elif mf < mg:
                out.append((mg, neg(mul(c, g[j][1]))))
                j += 1
            else:
                v = sub(f[i][1], mul(c, g[j][1]))
                if v:
                    out.append((mf, v))
                i += 1
                j += 1
        if i < nf:
            out.extend(f[i:])
        while j < ng:
            out.append((g[j][0] + off, neg(mul(c, g[j][1]))))
            j += 1
        return out

    def reduce(self, f, basis, full=True):
        """Normal form of f modulo monic packed polynomials ``basis``."""
        divides, div = self.packer.divides, self.packer.div
        lms = [g[0][0] for g in basis]
        rem = []
        pos = 0
        while pos < len(f):
            m, c = f[pos]
            for lm, g in zip(lms, basis):
                if divides(lm, m):
                    f = self.sub_scaled(f, pos, c, div(m, lm), g)
                    pos = 0
                    break
            else:
                if not full:
                    return f[pos:]
                rem.append((m, c))
                pos += 1
        return rem

    def s_poly(self, f, g):
        pk = self.packer
        l = pk.lcm(f[0][0], g[0][0])
        cf, cg = f[0][1], g[0][1]
        field = self.field
        # (l/LT f) f - (l/LT g) g
        a = [(pk.mul(pk.div(l, f[0][0]), m), field.mul(field.inv(cf), c)) for m, c in f]
        return self.sub_scaled(a, 0, field.inv(cg), pk.div(l, g[0][0]), g)


def _check_ring(polys, ring=None):
    for p in polys:
        if ring is None:
            ring = p.ring
        elif p.ring != ring:
            raise RingMismatchError(f"{p.ring} vs {ring}")
    return ring


def normal_form(f, basis, order=GREVLEX):
    """Remainder of f on division by ``basis`` (every remainder term is irreducible)."""
    ring = _check_ring([f, *basis])
    packer = _Packer(ring.nvars, order)
    eng = _Engine(ring.field, packer)
    packed = [eng.monic(_to_packed(g, packer)) for g in basis if g]
    return _from_packed(ring, eng.reduce(_to_packed(f, packer), packed), packer)


def s_polynomial(f, g, order=GREVLEX):
    ring = _check_ring([f, g])
    if not f or not g:
        raise ZeroPolynomialError("S-polynomial of a zero polynomial")
    packer = _Packer(ring.nvars, order)
    eng = _Engine(ring.field, packer)
    return _from_packed(ring, eng.s_poly(_to_packed(f, packer), _to_packed(g, packer)), packer)


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolyRing
    order: MonomialOrder
    polys: tuple
    steps: int = 0

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def leading_monomials(self):
        return [p.leading_monomial(self.order) for p in self.polys]

    def reduce(self, f):
        return normal_form(f, list(self.polys), self.order)

    def contains(self, f):
        return not self.reduce(f)

    def as_set(self):
        return frozenset(self.polys)

    def is_unit(self):
        return len(self.polys) == 1 and self.polys[0] == self.ring.one()


def buchberger(gens, order=GREVLEX, caps=None, ring=None):
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are processed by increasing lcm degree, with the Gebauer-Moeller
    update (product and chain criteria) discarding redundant pairs.
    """
    caps = caps or DEFAULT_CAPS
    ring = _check_ring(gens, ring)
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    packer = _Packer(ring.nvars, order)
    eng = _Engine(ring.field, packer)
    pk = packer

    polys = []      # all basis elements ever added (packed, monic)
    active = []     # indices into polys still in G
    pairs = {}      # (i, j) -> lcm
    heap = []
    counter = 0

    def push(i, j, l):
        nonlocal counter
        pairs[(i, j)] = l
        heapq.heappush(heap, (pk.degree(l), l, counter, i, j))
        counter += 1

    def update(h_idx):
        h_lm = polys[h_idx][0][0]
        cands = [(g, pk.lcm(h_lm, polys[g][0][0])) for g in active]
        keep = []
        for idx, (g, l) in enumerate(cands):
            if pk.coprime(h_lm, polys[g][0][0]):
                keep.append((g, l, True))
                continue
            others = [c[1] for k, c in enumerate(cands) if k > idx] + [k[1] for k in keep]
            if any(pk.divides(l2, l) for l2 in others):
                continue
            keep.append((g, l, False))
        # drop duplicates of the same lcm; keep the first
        chosen, seen = [], set()
        for g, l, coprime in keep:
            if l in seen:
                continue
            seen.add(l)
            chosen.append((g, l, coprime))
        for key, l in list(pairs.items()):
            i, j = key
            if (pk.divides(h_lm, l)
                    and pk.lcm(polys[i][0][0], h_lm) != l
                    and pk.lcm(polys[j][0][0], h_lm) != l):
                del pairs[key]
        for g, l, coprime in chosen:
            if not coprime:
                push(g, h_idx, l)
        active[:] = [g for g in active if not pk.divides(h_lm, polys[g][0][0])]
        active.append(h_idx)

    def add(p):
        polys.append(p)
        update(len(polys) - 1)

    base = [eng.monic(_to_packed(g, packer)) for g in gens if g]
    base.sort(key=lambda f: f[0][0])
    for f in base:
        f = eng.reduce(f, [polys[g] for g in active])
        if f:
            add(eng.monic(f))

    steps = 0
    while heap:
        _, l, _, i, j = heapq.heappop(heap)
        if pairs.get((i, j)) != l:
            continue
        del pairs[(i, j)]
        steps += 1
        if steps > caps.buchberger_steps:
            raise ResourceLimitError(f"Buchberger exceeded {caps.buchberger_steps} pair reductions")
        s = eng.s_poly(polys[i], polys[j])
        h = eng.reduce(s, [polys[g] for g in active])
        if h:
            add(eng.monic(h))

    # interreduce into the reduced basis
    g_list = sorted((polys[g] for g in active), key=lambda f: f[0][0])
    minimal = []
    for f in g_list:
        if not any(pk.divides(m[0][0], f[0][0]) for m in minimal):
            minimal.append(f)
    reduced = []
    for idx, f in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = eng.reduce(f[1:], others)
        reduced.append(eng.monic([f[0]] + tail))
    reduced.sort(key=lambda f: f[0][0], reverse=True)
    return GroebnerBasis(ring, order, tuple(_from_packed(ring, f, packer) for f in reduced), steps)


def standard_monomial_count(basis):
    """Number of monomials outside the initial ideal, or INFINITE."""
    if isinstance(basis, GroebnerBasis):
        nvars = basis.ring.nvars
        lms = basis.leading_monomials()
    else:
        lms, nvars = list(basis[0]), basis[1]
    if any(not any(e) for e in lms):
        return 0
    bounds = []
    for i in range(nvars):
        pure = [e[i] for e in lms if e[i] and all(x == 0 for k, x in enumerate(e) if k != i)]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    return _count_standard(tuple(bounds), _minimalize(lms))


def _minimalize(lms):
    lms = sorted(set(lms), key=sum)
    out = []
    for e in lms:
        if not any(all(a <= b for a, b in zip(m, e)) for m in out):
            out.append(e)
    return frozenset(out)


@lru_cache(maxsize=200_000)
def _count_standard(bounds, lms):
    if not bounds:
        return 0 if lms else 1
    if any(not any(e) for e in lms):
        return 0
    total = 0
    for x in range(bounds[0]):
        rest = _minimalize([e[1:] for e in lms if e[0] <= x])
        total += _count_standard(bounds[1:], rest)
    return total
