"""Evolution algebras given by their structure matrix.

An evolution algebra of dimension n has a natural basis e_1..e_n with
e_i e_j = 0 for i != j and e_i e_i = sum_j T[i][j] e_j.  Only T is stored;
entries are field codes (see :mod:`evoclass.gf`).
"""

import json
import re
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg
from .caps import DEFAULT_CAPS
from .errors import DimensionMismatchError, FieldMismatchError, ParseError, ZeroScaleError
from .gf import FieldSpec, field_from_order, field_make


@dataclass(frozen=True)
class EvolutionAlgebra:
    field: FieldSpec
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatchError("structure matrix must be square and nonempty")
        if any(not 0 <= x < self.field.q for r in rows for x in r):
            raise ParseError(f"structure constant out of range for {self.field}")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return len(self.rows)

    @property
    def flat(self):
        return tuple(x for r in self.rows for x in r)

    @property
    def index(self):
        """Position in the enumeration order (row-major, base q)."""
        idx = 0
        for x in self.flat:
            idx = idx * self.field.q + x
        return idx

    @classmethod
    def from_index(cls, field, n, index):
        digits = []
        for _ in range(n * n):
            index, r = divmod(index, field.q)
            digits.append(r)
        digits.reverse()
        return cls(field, tuple(tuple(digits[i * n:(i + 1) * n]) for i in range(n)))

    @classmethod
    def zero(cls, field, n):
        return cls(field, tuple((0,) * n for _ in range(n)))

    def array(self):
        return np.array(self.rows, dtype=np.int64)

    def literal(self):
        enc = self.field.encode
        return ";".join(",".join(enc(x) for x in r) for r in self.rows)

    def tuple_notation(self):
        return "(" + ",".join(format_vector(self.field, r) for r in self.rows) + ")"

    def __str__(self):
        return self.literal()

    def __repr__(self):
        return f"EvolutionAlgebra({self.field!r}, {self.literal()!r})"


def _check_vector(a, v):
    if len(v) != a.n:
        raise DimensionMismatchError(f"vector of length {len(v)} used with a {a.n}-dimensional algebra")
    return tuple(a.field.code(x) for x in v)


def multiply(a, u, v):
    """Product uv in the algebra; vectors are coordinate sequences."""
    f = a.field
    u = _check_vector(a, u)
    v = _check_vector(a, v)
    out = [0] * a.n
    for i in range(a.n):
        w = f.mul(u[i], v[i])
        if w:
            for j, t in enumerate(a.rows[i]):
                if t:
                    out[j] = f.add(out[j], f.mul(w, t))
    return tuple(out)


def basis_vector(n, i):
    return tuple(int(j == i) for j in range(n))


def derived_dim(a):
    """dim A^2, which is the row rank of T."""
    return linalg.rank(a.field, a.rows)


def annihilator_dim(a):
    """dim Ann(A): e_i is annihilating exactly when row i of T vanishes."""
    return sum(1 for r in a.rows if not any(r))


def signature(a):
    return annihilator_dim(a), derived_dim(a)


def enumerate_algebras(field, n, caps=None):
    """Every structure matrix over the field, in enumeration order."""
    caps = caps or DEFAULT_CAPS
    caps.check("enumeration", field.q ** (n * n))
    for flat in product(range(field.q), repeat=n * n):
        yield EvolutionAlgebra(field, tuple(flat[i * n:(i + 1) * n] for i in range(n)))


def transport_monomial(a, sigma, scale):
    """Image of A under the monomial map e_i -> scale[i] * e'_{sigma[i]}.

    ``sigma`` is a 0-based permutation.  Row sigma(i), column sigma(j) of the
    result holds scale[j] * T[i][j] / scale[i]^2.
    """
    f = a.field
    n = a.n
    scale = [f.code(s) for s in scale]
    if len(scale) != n or sorted(sigma) != list(range(n)):
        raise DimensionMismatchError("sigma must permute range(n) and scale have n entries")
    if any(s == 0 for s in scale):
        raise ZeroScaleError("monomial scale factors must be nonzero")
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        inv_sq = f.inv(f.mul(scale[i], scale[i]))
        for j in range(n):
            out[sigma[i]][sigma[j]] = f.mul(f.mul(scale[j], a.rows[i][j]), inv_sq)
    return EvolutionAlgebra(f, tuple(tuple(r) for r in out))


def monomial_matrix(field, sigma, scale):
    """Matrix F with F[i][sigma[i]] = scale[i], i.e. the map used by transport_monomial."""
    n = len(sigma)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        out[i][sigma[i]] = field.code(scale[i])
    return tuple(tuple(r) for r in out)


# -- text formats ------------------------------------------------------------

def split_top(text, sep):
    """Split on sep, ignoring separators inside brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_algebra(field, text):
    """Parse the inline literal: rows ';'-separated, entries ','-separated."""
    rows = [split_top(r, ",") for r in split_top(text.strip(), ";")]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError(f"algebra literal {text!r} is not square")
    return EvolutionAlgebra(field, tuple(tuple(field.parse(x) for x in r) for r in rows))


_TERM = re.compile(r"\s*([+-]?)\s*(\[[^\]]*\]|\d+)?\s*\*?\s*(e(\d+))?\s*")


def parse_vector(field, text, n):
    """Parse a linear combination like ``2e1+e2`` or ``-e1`` or ``0``."""
    s = text.strip()
    if s.startswith("-(") and s.endswith(")"):
        return tuple(field.neg(x) for x in parse_vector(field, s[2:-1], n))
    out = [0] * n
    pos = 0
    if not s:
        raise ParseError("empty vector")
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ParseError(f"cannot parse vector {text!r}")
        sign, coef, _, idx = m.groups()
        c = field.parse(coef) if coef else 1
        if sign == "-":
            c = field.neg(c)
        if idx is None:
            if c != 0:
                raise ParseError(f"constant term in vector {text!r}")
        else:
            i = int(idx) - 1
            if not 0 <= i < n:
                raise ParseError(f"basis index out of range in {text!r}")
            out[i] = field.add(out[i], c)
        pos = m.end()
    return tuple(out)


def parse_tuple_notation(field, text):
    """Parse a structure tuple such as ``(e1+e2,2e1+3e2)``."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError(f"structure tuple must be parenthesized: {text!r}")
    parts = _split_parens(s[1:-1])
    n = len(parts)
    return EvolutionAlgebra(field, tuple(parse_vector(field, p, n) for p in parts))


def _split_parens(s):
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def format_vector(field, v):
    terms = []
    for j, c in enumerate(v):
        if c:
            coef = "" if c == 1 else field.encode(c)
            terms.append(f"{coef}e{j + 1}")
    return "+".join(terms) if terms else "0"


def algebra_to_dict(a):
    f = a.field
    d = {"q": f.q} if f.k == 1 else {"p": f.p, "k": f.k}
    d["n"] = a.n
    d["rows"] = [[f.encode(x) for x in r] for r in a.rows]
    return d


def algebra_from_dict(d, caps=None):
    if "q" in d:
        field = field_from_order(int(d["q"]), caps)
    elif "p" in d:
        field = field_make(int(d["p"]), int(d.get("k", 1)), caps)
    else:
        raise ParseError("algebra document needs 'q' or 'p' (and 'k')")
    rows = d.get("rows")
    if not isinstance(rows, list):
        raise ParseError("algebra document needs a 'rows' list")
    a = EvolutionAlgebra(field, tuple(tuple(field.parse(x) for x in r) for r in rows))
    if "n" in d and int(d["n"]) != a.n:
        raise ParseError(f"declared n={d['n']} but rows give n={a.n}")
    return a


def dump_algebra(a, fp):
    json.dump(algebra_to_dict(a), fp)
    fp.write("\n")


def load_algebra(fp, caps=None):
    try:
        d = json.load(fp)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid algebra document: {exc}") from None
    return algebra_from_dict(d, caps)


def require_compatible(a, b):
    if a.field != b.field:
        raise FieldMismatchError(f"algebras over {a.field} and {b.field}")
    if a.n != b.n:
        raise DimensionMismatchError(f"dimensions {a.n} and {b.n} differ")
