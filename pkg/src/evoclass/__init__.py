"""Evolution algebras over finite fields: isotopism and isomorphism classification."""

from .caps import DEFAULT_CAPS, Caps
from .classify import (
    ClassLabel,
    Partition,
    algorithm1,
    class_counts,
    isomorphism_label_2d,
    isotopism_class_2d,
    strong_isotopy_normal_form,
)
from .errors import CapExceededError, EvoclassError, ParseError, ResourceLimitError
from .evoalg import (
    EvolutionAlgebra,
    annihilator_dim,
    derived_dim,
    enumerate_algebras,
    multiply,
    parse_algebra,
    parse_tuple_notation,
    transport_monomial,
)
from .gf import FieldElement, FieldSpec, field_from_order, field_make, unit_orbit
from .ideals import count_points, isom_ideal, isot_ideal
from .polyring import GREVLEX, LEX, MonomialOrder, Polynomial, PolyRing, buchberger, normal_form, s_polynomial, standard_monomial_count
from .search import MapTriple, find_witness, gl_enumerate, verify_isotopism

__version__ = "0.1.0"
