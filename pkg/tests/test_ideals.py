from itertools import product

import numpy as np
import pytest

from evoclass.caps import DEFAULT_CAPS
from evoclass.errors import CapExceededError, DimensionMismatchError, FieldMismatchError
from evoclass.evoalg import EvolutionAlgebra, enumerate_algebras
from evoclass.gf import field_from_order
from evoclass.ideals import (
    EXHAUSTIVE, GROEBNER, RABINOWITSCH, count_points, count_record, isom_ideal, isot_ideal,
)
from evoclass.linalg import det
from evoclass.search import verify_isomorphism

from conftest import alg

ZERO, E1, E4, E2, E500 = "0,0;0,0", "1,0;0,0", "0,1;0,0", "1,0;1,0", "1,0;0,1"


def both(ideal):
    return count_points(ideal, GROEBNER), count_points(ideal, EXHAUSTIVE)


def independent_isomorphism_count(a, b):
    """Count invertible F with f(e_i) f(e_j) = f(e_i e_j) by direct products."""
    f, n = a.field, a.n
    total = 0
    for flat in product(range(f.q), repeat=n * n):
        m = tuple(flat[i * n:(i + 1) * n] for i in range(n))
        if det(f, m) and verify_isomorphism(a, b, m):
            total += 1
    return total


def test_variables_and_generators():
    ideal = isom_ideal(alg(2, E1), alg(2, E4))
    assert ideal.variables() == ("f11", "f12", "f21", "f22")
    assert len(ideal.field_equations) == 4
    assert len(ideal.units) == 1
    iso = isot_ideal(alg(3, E1), alg(3, E4))
    assert len(iso.variables()) == 12
    assert len(iso.units) == 3
    assert all(g.total_degree() <= 3 for g in iso.field_equations)


def test_spec_examples():
    assert both(isom_ideal(alg(2, ZERO), alg(2, ZERO))) == (6, 6)
    assert both(isom_ideal(alg(2, E1), alg(2, E4))) == (0, 0)
    assert count_points(isom_ideal(alg(2, E1), alg(2, E1))) >= 1
    assert both(isot_ideal(alg(2, ZERO), alg(2, ZERO))) == (216, 216)
    assert count_points(isot_ideal(alg(2, E1), alg(2, E4))) > 0
    assert both(isot_ideal(alg(2, ZERO), alg(2, E1))) == (0, 0)
    assert both(isom_ideal(alg(2, "(e1,e1)"), alg(2, "(e1+e2,e1+e2)"))) == (0, 0)
    assert both(isot_ideal(alg(2, E2), alg(2, E500))) == (0, 0)


def test_abelian_isotopism_gf3():
    assert count_points(isot_ideal(alg(3, ZERO), alg(3, ZERO)), EXHAUSTIVE) == 48**3


@pytest.mark.parametrize("q", [2, 3])
def test_isomorphism_counts_match_direct_search(q):
    f = field_from_order(q)
    algs = list(enumerate_algebras(f, 2))
    rng = np.random.default_rng(q)
    for _ in range(30):
        a, b = (algs[i] for i in rng.integers(0, len(algs), 2))
        assert count_points(isom_ideal(a, b)) == independent_isomorphism_count(a, b)


@pytest.mark.parametrize("q", [2, 3])
def test_encodings_agree(q):
    f = field_from_order(q)
    algs = list(enumerate_algebras(f, 2))
    rng = np.random.default_rng(10 + q)
    for _ in range(12 if q == 2 else 6):
        a, b = (algs[i] for i in rng.integers(0, len(algs), 2))
        assert count_points(isom_ideal(a, b)) == count_points(isom_ideal(a, b, RABINOWITSCH))
    for _ in range(4 if q == 2 else 2):
        a, b = (algs[i] for i in rng.integers(0, len(algs), 2))
        assert count_points(isot_ideal(a, b)) == count_points(isot_ideal(a, b, RABINOWITSCH))


def test_literal_unit_constraint_has_reduced_exponents():
    ideal = isom_ideal(alg(7, E1), alg(7, E1))
    (unit,) = ideal.units
    assert max(max(e) for e in unit.terms) <= 6


def test_symmetry_identity_nesting_gf2():
    f = field_from_order(2)
    algs = list(enumerate_algebras(f, 2))
    iso = {(a, b): count_points(isom_ideal(a, b)) for a in algs for b in algs}
    isot = {(a, b): count_points(isot_ideal(a, b)) for a in algs for b in algs}
    for a in algs:
        assert iso[(a, a)] >= 1
        for b in algs:
            assert (iso[(a, b)] > 0) == (iso[(b, a)] > 0)
            assert (isot[(a, b)] > 0) == (isot[(b, a)] > 0)
            if iso[(a, b)]:
                assert isot[(a, b)] > 0
            # points of Aut(a) act freely and transitively on Iso(a, b)
            if iso[(a, b)]:
                assert iso[(a, b)] == iso[(a, a)]


def test_mismatches():
    with pytest.raises(FieldMismatchError):
        isom_ideal(alg(2, E1), alg(3, E1))
    f = field_from_order(3)
    with pytest.raises(DimensionMismatchError):
        isot_ideal(EvolutionAlgebra.zero(f, 2), EvolutionAlgebra.zero(f, 3))


def test_exhaustion_cap_names_cap():
    ideal = isot_ideal(alg(5, E1), alg(5, E1))
    with pytest.raises(CapExceededError) as exc:
        count_points(ideal, EXHAUSTIVE)
    assert exc.value.cap == "exhaustion"
    small = DEFAULT_CAPS.replace(exhaustion=10)
    with pytest.raises(CapExceededError):
        count_points(isom_ideal(alg(2, E1), alg(2, E1)), EXHAUSTIVE, caps=small)


def test_count_record():
    ideal = isom_ideal(alg(2, ZERO), alg(2, ZERO))
    rec = count_record(ideal, GROEBNER, 6)
    assert rec == {"left": "0,0;0,0", "right": "0,0;0,0", "relation": "isomorphism", "method": "groebner", "count": 6}
