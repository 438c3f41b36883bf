import pytest

from evoclass.evoalg import parse_algebra, parse_tuple_notation
from evoclass.gf import field_from_order


def alg(q, text):
    """Algebra over GF(q) from an inline literal or a structure tuple."""
    field = field_from_order(q)
    if text.strip().startswith("("):
        return parse_tuple_notation(field, text)
    return parse_algebra(field, text)


@pytest.fixture
def gf():
    return field_from_order
