from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evoclass.caps import DEFAULT_CAPS
from evoclass.errors import ResourceLimitError, RingMismatchError, ZeroPolynomialError
from evoclass.gf import field_from_order
from evoclass.polyring import (
    GREVLEX, INFINITE, LEX, MonomialOrder, PolyRing, Polynomial, buchberger, normal_form,
    s_polynomial, standard_monomial_count,
)


def ring(q, names="x y"):
    return PolyRing(field_from_order(q), names.split())


def random_poly(r, rng, nterms=3, maxdeg=2):
    terms = {}
    for _ in range(nterms):
        e = tuple(int(x) for x in rng.integers(0, maxdeg + 1, r.nvars))
        terms[e] = int(rng.integers(1, r.field.q))
    return Polynomial(r, terms)


def random_system(q, nvars, seed, ngens=None):
    r = PolyRing(field_from_order(q), [f"x{i}" for i in range(nvars)])
    rng = np.random.default_rng(seed)
    ngens = ngens or int(rng.integers(1, nvars + 2))
    gens = [random_poly(r, rng, int(rng.integers(1, 4))) for _ in range(ngens)]
    return r, [g for g in gens if g] + [r.field_equation(i) for i in range(nvars)]


def brute_count(r, gens):
    pts = np.array(list(product(range(r.field.q), repeat=r.nvars)), dtype=np.int64)
    ok = np.ones(len(pts), dtype=bool)
    for g in gens:
        ok &= g.evaluate_batch(pts) == 0
    return int(ok.sum())


def test_normal_form_examples():
    r = ring(3, "x")
    x = r.var("x")
    assert normal_form(x**2 - x, [x**2 - x], LEX) == 0
    assert normal_form(x**2, [x - 1], LEX) == 1
    r2 = ring(3)
    xy = r2.var("x") * r2.var("y")
    assert normal_form(xy, [], LEX) == xy


def test_normal_form_remainder_in_ideal():
    r = ring(3, "x")
    x = r.var("x")
    f = x**2
    rem = normal_form(f, [x - 1], LEX)
    assert (f - rem).evaluate((1,)) == 0


def test_s_polynomial_examples():
    r = ring(2)
    x, y = r.gens()
    f, g = x**2 - x, x * y - y
    assert s_polynomial(f, f, LEX) == 0
    s = s_polynomial(f, g, LEX)
    # y*f - x*g: the x^2 y terms cancel
    assert s == y * f - x * g
    assert all(e != (2, 1) for e in s.terms)
    assert normal_form(s_polynomial(x**2, y**2), [x**2, y**2]) == 0
    with pytest.raises(ZeroPolynomialError):
        s_polynomial(r.zero(), f)


def test_buchberger_examples():
    r = ring(3, "x")
    x = r.var("x")
    gb = buchberger([x**2 - 1, x - 1], LEX)
    assert gb.as_set() == {x - 1}
    assert normal_form(x**2 - 1, [x - 1], LEX) == 0
    assert buchberger([r.field_equation(0)]).as_set() == {x**3 - x}
    assert buchberger([r.one()]).is_unit()
    assert len(buchberger([r.zero()])) == 0


def test_standard_monomial_examples():
    r = ring(2)
    x, y = r.gens()
    assert standard_monomial_count(buchberger([x**2 - x, y**2 - y])) == 4
    r1 = ring(5, "x")
    assert standard_monomial_count(buchberger([r1.var("x") - 1])) == 1
    assert standard_monomial_count(buchberger([r.one()])) == 0
    assert standard_monomial_count(buchberger([x * y])) == INFINITE


def test_ring_mismatch():
    a, b = ring(3), ring(5)
    with pytest.raises(RingMismatchError):
        normal_form(a.var("x"), [b.var("x")])
    with pytest.raises(RingMismatchError):
        buchberger([a.var("x"), b.var("y")])


def test_step_cap():
    r, gens = random_system(7, 4, 11, ngens=4)
    with pytest.raises(ResourceLimitError):
        buchberger(gens, caps=DEFAULT_CAPS.replace(buchberger_steps=1))


def test_parse_and_print():
    r = ring(5)
    p = r.parse("3*x^2*y + 4*y - 2")
    assert p == r.var("x") ** 2 * r.var("y") * 3 + r.var("y") * 4 + 3
    assert r.parse(str(p)) == p
    r4 = PolyRing(field_from_order(4), ["a"])
    p4 = r4.parse("[0,1]*a^2 + [1,1]")
    assert r4.parse(str(p4)) == p4


def check_reduced(gb):
    lms = gb.leading_monomials()
    for i, p in enumerate(gb):
        assert p.leading_coefficient(gb.order) == 1
        for j, m in enumerate(lms):
            if i != j:
                assert not any(all(a >= b for a, b in zip(e, m)) for e in p.terms)


def check_s_pairs(gb):
    polys = list(gb)
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            assert normal_form(s_polynomial(polys[i], polys[j], gb.order), polys, gb.order) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("order", [GREVLEX, LEX])
def test_count_matches_brute_force(q, order):
    for seed in range(25):
        nvars = 1 + seed % 4 if q <= 5 else 1 + seed % 3
        r, gens = random_system(q, nvars, seed)
        gb = buchberger(gens, order)
        assert standard_monomial_count(gb) == brute_count(r, gens)
        check_reduced(gb)
        check_s_pairs(gb)
        for g in gens:
            assert gb.contains(g)


def test_count_matches_brute_force_many_binary_vars():
    for seed in range(10):
        nvars = 8 + seed % 5
        r, gens = random_system(2, nvars, 100 + seed, ngens=nvars)
        assert standard_monomial_count(buchberger(gens)) == brute_count(r, gens)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_generator_permutations_give_same_basis(q):
    rng = np.random.default_rng(q)
    for seed in range(8):
        r, gens = random_system(q, 3, 200 + seed, ngens=3)
        ref = buchberger(gens).as_set()
        for _ in range(5):
            perm = rng.permutation(len(gens))
            assert buchberger([gens[i] for i in perm]).as_set() == ref


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 3), st.integers(0, 2**30))
def test_normal_form_idempotent(q, nvars, seed):
    r, gens = random_system(q, nvars, seed)
    f = random_poly(r, np.random.default_rng(seed + 1), 4, 4)
    for order in (GREVLEX, LEX):
        gb = buchberger(gens, order)
        nf = gb.reduce(f)
        assert gb.reduce(nf) == nf
        lms = gb.leading_monomials()
        assert not any(all(a >= b for a, b in zip(e, m)) for e in nf.terms for m in lms)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["grevlex", "lex"]), st.integers(1, 4), st.data())
def test_order_properties(tag, nvars, data):
    order = MonomialOrder(tag)
    mono = st.tuples(*[st.integers(0, 5)] * nvars)
    a, b, c = data.draw(mono), data.draw(mono), data.draw(mono)
    ka, kb = order.key(a), order.key(b)
    assert (ka == kb) == (a == b)
    add = lambda u, v: tuple(x + y for x, y in zip(u, v))
    if ka < kb:
        assert order.key(add(a, c)) < order.key(add(b, c))
    assert order.key((0,) * nvars) <= ka


def test_matches_sympy():
    sympy = pytest.importorskip("sympy")
    for q in (2, 3, 5, 7):
        for seed in range(6):
            r, gens = random_system(q, 3, 300 + seed, ngens=3)
            syms = sympy.symbols(r.names)
            exprs = [sum(c * sympy.prod([s**k for s, k in zip(syms, e)]) for e, c in g.terms.items()) for g in gens]
            for tag, sym_order in (("grevlex", "grevlex"), ("lex", "lex")):
                theirs = sympy.groebner(exprs, *syms, modulus=q, order=sym_order)
                ours = buchberger(gens, MonomialOrder(tag))
                converted = set()
                for p in theirs.polys:
                    poly = Polynomial(r, {m: int(c) % q for m, c in p.terms()})
                    converted.add(poly.monic(ours.order))
                assert converted == ours.as_set()
