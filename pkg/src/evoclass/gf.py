"""Exact arithmetic in GF(p^k).

Field elements are handled internally as integer codes: the element
``c0 + c1*x + ... + c(k-1)*x^(k-1)`` has code ``c0 + c1*p + ... ``.  Code
order is the canonical element order used for every tie-break in the
package (``0, 1, x, x+1`` for GF(4)).  :class:`FieldElement` wraps a code
for callers who prefer operator syntax.

Textual encoding: a decimal residue for prime fields, ``[c0,c1,...]`` with
the constant term first for extension fields.
"""

from functools import lru_cache
from itertools import product

import numpy as np

from .caps import DEFAULT_CAPS
from .errors import (
    FieldMismatchError,
    InvalidDegreeError,
    NotPrimeError,
    ParseError,
    ZeroElementError,
    ZeroInverseError,
)

_ADD_TABLE_LIMIT = 1024


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_rem(a, m, p):
    """Remainder of a modulo monic m; coefficient lists, constant term first."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]]


def is_irreducible(poly, p):
    """Exhaustive factor test for a monic polynomial over GF(p)."""
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not any(_poly_rem(poly, list(low) + [1], p)):
                return False
    return True


def first_irreducible(p, k):
    """First monic irreducible of degree k, coefficient tuples in lex order (constant first)."""
    for low in product(range(p), repeat=k):
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


class FieldSpec:
    """The finite field GF(p^k); arithmetic methods act on integer codes."""

    def __init__(self, p, k, modulus=None):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        if k == 1:
            self._init_prime()
        else:
            self._init_extension()

    # -- construction -----------------------------------------------------

    def _init_prime(self):
        p = self.p
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.neg = lambda a: (-a) % p
        self.mul = lambda a, b: (a * b) % p
        self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _from_digits(self, digits):
        code = 0
        for c in reversed(digits):
            code = code * self.p + c
        return code

    def _slow_mul(self, a, b):
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._from_digits(_poly_rem(prod, self.modulus, p))

    def _slow_pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _slow_add(self, a, b):
        p = self.p
        return self._from_digits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def _init_extension(self):
        p, q = self.p, self.q
        # exp/log tables from the first primitive element in code order
        order = q - 1
        factors = {r for r in range(2, order + 1) if order % r == 0 and is_prime(r)}
        g = next(g for g in range(2, q) if all(self._slow_pow(g, order // r) != 1 for r in factors))
        exp = [1]
        for _ in range(q - 2):
            exp.append(self._slow_mul(exp[-1], g))
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp, self._log = exp, log
        self._np_exp = np.array(exp + exp, dtype=np.int64)
        self._np_log = np.array(log, dtype=np.int64)
        if p == 2:
            self.add = self.sub = lambda a, b: a ^ b
            self.neg = lambda a: a
        else:
            neg = [self._from_digits([(-c) % p for c in self._digits(a)]) for a in range(q)]
            self._neg_table = neg
            if q <= _ADD_TABLE_LIMIT:
                table = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
                self._add_table = table
                self.add = lambda a, b: table[a][b]
                self.sub = lambda a, b: table[a][neg[b]]
            else:
                self.add = self._slow_add
                self.sub = lambda a, b: self._slow_add(a, neg[b])
            self.neg = lambda a: neg[a]
        n1 = q - 1
        self.mul = lambda a, b: exp[(log[a] + log[b]) % n1] if a and b else 0

    # -- scalar arithmetic on codes ---------------------------------------

    def inv(self, a):
        if a == 0:
            raise ZeroInverseError("inverse of zero")
        if self.k == 1:
            return self._inv[a]
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, n):
        """Image of the integer n in the prime subfield."""
        return n % self.p

    # -- vectorized arithmetic on numpy code arrays -------------------------

    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._vdigit_op(a, b, 1)

    def vsub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._vdigit_op(a, b, -1)

    def _vdigit_op(self, a, b, sign):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.k):
            out += ((a // scale % p + sign * (b // scale % p)) % p) * scale
            scale *= p
        return out

    def vneg(self, a):
        return self.vsub(np.zeros_like(a), a)

    def vmul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._np_exp[self._np_log[a] + self._np_log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            table = np.array(self._inv, dtype=np.int64)
            return table[a]
        return np.where(a == 0, 0, self._np_exp[(self.q - 1 - self._np_log[a]) % (self.q - 1)])

    # -- text encoding -----------------------------------------------------

    def encode(self, a):
        if self.k == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in self._digits(a)) + "]"

    def coefficients(self, a):
        return tuple(self._digits(a)) if self.k > 1 else (a,)

    def parse(self, text):
        """Decode an element; prime-subfield integers are accepted in any field."""
        s = str(text).strip()
        if s.startswith("["):
            if not s.endswith("]") or self.k == 1:
                raise ParseError(f"bad element {text!r} for {self}")
            parts = [t.strip() for t in s[1:-1].split(",")]
            try:
                digits = [int(t) for t in parts]
            except ValueError:
                raise ParseError(f"bad element {text!r}") from None
            if len(digits) != self.k or any(not 0 <= c < self.p for c in digits):
                raise ParseError(f"element {text!r} needs {self.k} coefficients in [0, {self.p})")
            return self._from_digits(digits)
        try:
            n = int(s)
        except ValueError:
            raise ParseError(f"bad element {text!r}") from None
        if not -self.p < n < self.p:
            raise ParseError(f"element {text!r} out of range for {self}")
        return n % self.p

    def element(self, value):
        """Coerce an int code, encoded string or FieldElement to a FieldElement."""
        return FieldElement(self, self.code(value))

    def code(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value!r} is not in {self}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        value = int(value)
        if not 0 <= value < self.q:
            raise ParseError(f"code {value} out of range for {self}")
        return value

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.q})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return (field_make, (self.p, self.k))


@lru_cache(maxsize=None)
def _make(p, k):
    modulus = first_irreducible(p, k) if k > 1 else None
    return FieldSpec(p, k, modulus)


def field_make(p, k=1, caps=None):
    """Return GF(p^k) with a deterministic modulus (first irreducible found)."""
    caps = caps or DEFAULT_CAPS
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrimeError(f"p not prime: {p}")
    if not isinstance(k, int) or k < 1:
        raise InvalidDegreeError(f"extension degree must be >= 1, got {k}")
    caps.check("field_size", p**k)
    return _make(p, k)


def field_from_order(q, caps=None):
    """Return GF(q) for a prime power q."""
    if q < 2:
        raise NotPrimeError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise NotPrimeError(f"{q} is not a prime power")
    return field_make(p, k, caps)


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field} and {other.field} elements")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else FieldElement(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def coefficients(self):
        return self.field.coefficients(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __lt__(self, other):
        return self.value < self._other(other)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.encode(self.value)

    def __repr__(self):
        return f"{self.field!r}({self.field.encode(self.value)})"


def _check_same(a, b):
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise TypeError("expected FieldElement operands")
    if a.field != b.field:
        raise FieldMismatchError(f"cannot combine {a.field} and {b.field} elements")


def add(a, b):
    _check_same(a, b)
    return a + b


def neg(a):
    return -a


def mul(a, b):
    _check_same(a, b)
    return a * b


def inv(a):
    return a.inverse()


def power(a, e):
    """a**e for an integer exponent (negative exponents invert)."""
    return a**e


def elements(field):
    """All q elements in canonical order."""
    return [FieldElement(field, v) for v in range(field.q)]


def unit_orbit_codes(field, c, exponent):
    if c == 0:
        raise ZeroElementError("unit_orbit needs a nonzero element")
    return frozenset(field.mul(c, field.pow(m, exponent)) for m in range(1, field.q))


def unit_orbit(field, c, exponent):
    """The set {c * m**exponent : m != 0}."""
    codes = unit_orbit_codes(field, field.code(c), exponent)
    return frozenset(FieldElement(field, v) for v in codes)
