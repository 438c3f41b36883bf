import io
from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from evoclass import linalg
from evoclass.caps import DEFAULT_CAPS
from evoclass.errors import CapExceededError, DimensionMismatchError, FieldMismatchError, ParseError, ZeroScaleError
from evoclass.evoalg import (
    EvolutionAlgebra, annihilator_dim, basis_vector, derived_dim, dump_algebra,
    enumerate_algebras, load_algebra, monomial_matrix, multiply, parse_algebra,
    parse_tuple_notation, transport_monomial,
)
from evoclass.gf import field_from_order
from evoclass.search import verify_isomorphism

from conftest import alg

E1 = "1,0;0,0"
E2 = "1,0;1,0"
E500 = "1,0;0,1"
E1_, E2_ = basis_vector(2, 0), basis_vector(2, 1)


def test_multiply_examples():
    assert multiply(alg(2, E1), E1_, E1_) == (1, 0)
    assert multiply(alg(3, "2,1;1,2"), E1_, E2_) == (0, 0)
    assert multiply(alg(3, E2), (1, 1), (1, 1)) == (2, 0)


def test_multiply_rejects_bad_vectors():
    with pytest.raises(DimensionMismatchError):
        multiply(alg(3, E2), (1, 0, 0), (1, 0))


def test_invariant_examples():
    assert derived_dim(alg(3, E2)) == 1
    assert derived_dim(alg(3, E500)) == 2
    assert derived_dim(alg(3, "0,0;0,0")) == 0
    assert annihilator_dim(alg(3, E1)) == 1
    assert annihilator_dim(alg(3, E2)) == 0
    assert annihilator_dim(alg(3, "0,0;0,0")) == 2


def test_enumeration():
    algs = list(enumerate_algebras(field_from_order(2), 2))
    assert len(algs) == 16
    assert len(list(enumerate_algebras(field_from_order(3), 2))) == 81
    assert algs[0] == EvolutionAlgebra.zero(field_from_order(2), 2)
    assert [a.index for a in algs] == list(range(16))
    assert EvolutionAlgebra.from_index(field_from_order(2), 2, 9) == algs[9]
    with pytest.raises(CapExceededError):
        list(enumerate_algebras(field_from_order(5), 3, DEFAULT_CAPS.replace(enumeration=1000)))


def test_transport_examples():
    f = field_from_order(3)
    a = alg(3, E1)
    assert transport_monomial(a, (0, 1), (1, 1)) == a
    b = transport_monomial(a, (0, 1), (2, 1))
    assert b.rows == ((2, 0), (0, 0))
    assert verify_isomorphism(a, b, monomial_matrix(f, (0, 1), (2, 1)))
    assert transport_monomial(a, (1, 0), (1, 1)).rows == ((0, 0), (0, 1))
    with pytest.raises(ZeroScaleError):
        transport_monomial(a, (0, 1), (0, 1))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_transport_always_isomorphic(q):
    f = field_from_order(q)
    units = range(1, q)
    for a in list(enumerate_algebras(f, 2))[::3]:
        for sigma in permutations(range(2)):
            for scale in product(units, repeat=2):
                b = transport_monomial(a, sigma, scale)
                assert verify_isomorphism(a, b, monomial_matrix(f, sigma, scale))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7]), st.integers(1, 3), st.data())
def test_bilinear_commutative(q, n, data):
    f = field_from_order(q)
    el = st.integers(0, q - 1)
    vec = st.tuples(*[el] * n)
    rows = data.draw(st.tuples(*[vec] * n))
    a = EvolutionAlgebra(f, rows)
    u, u2, v = data.draw(vec), data.draw(vec), data.draw(vec)
    alpha = data.draw(el)
    au = tuple(f.add(f.mul(alpha, x), y) for x, y in zip(u, u2))
    lhs = multiply(a, au, v)
    rhs = tuple(f.add(f.mul(alpha, x), y) for x, y in zip(multiply(a, u, v), multiply(a, u2, v)))
    assert lhs == rhs
    assert multiply(a, u, v) == multiply(a, v, u)


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3)])
def test_invariants_match_definitions(q, n):
    f = field_from_order(q)
    basis = [basis_vector(n, i) for i in range(n)]
    for a in enumerate_algebras(f, n):
        products = [multiply(a, u, v) for u in basis for v in basis]
        assert derived_dim(a) == linalg.rank(f, products)
        ann = [i for i in range(n) if all(multiply(a, basis[i], v) == (0,) * n for v in basis)]
        assert annihilator_dim(a) == len(ann)
        for i in range(n):
            if i not in ann:
                assert any(any(multiply(a, basis[i], v)) for v in basis)


def test_literal_and_tuple_formats():
    f = field_from_order(5)
    a = parse_tuple_notation(f, "(e1+e2,2e1+3e2)")
    assert a.rows == ((1, 1), (2, 3))
    assert a.tuple_notation() == "(e1+e2,2e1+3e2)"
    assert parse_algebra(f, a.literal()) == a
    assert parse_tuple_notation(f, "(-e1,0)").rows == ((4, 0), (0, 0))
    with pytest.raises(ParseError):
        parse_algebra(f, "1,0;1")
    with pytest.raises(ParseError):
        parse_algebra(f, "7,0;0,0")
    g = field_from_order(4)
    b = parse_algebra(g, "[0,1],0;1,[1,1]")
    assert parse_algebra(g, b.literal()) == b


def test_document_roundtrip():
    for a in [alg(7, "3,1;0,6"), parse_algebra(field_from_order(9), "[1,2],0;0,1")]:
        buf = io.StringIO()
        dump_algebra(a, buf)
        buf.seek(0)
        assert load_algebra(buf) == a
    with pytest.raises(ParseError):
        load_algebra(io.StringIO('{"q": 5, "n": 3, "rows": [["1","0"],["0","1"]]}'))
    with pytest.raises(ParseError):
        load_algebra(io.StringIO("not json"))


def test_mismatched_fields():
    from evoclass.evoalg import require_compatible
    with pytest.raises(FieldMismatchError):
        require_compatible(alg(3, E1), alg(5, E1))
