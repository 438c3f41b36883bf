"""Reference isomorphism-class data for two-dimensional evolution algebras over GF(q).

Representatives are structure tuples ``(e_1 e_1, e_2 e_2)``.  The q = 7 list
is kept as given for comparison only; it is never treated as ground truth
(see :func:`evoclass.classify.adjudicate_reference`).
"""

REFERENCE_COUNTS = {2: 9, 3: 13, 5: 23, 7: 38}

ISOTOPISM_CLASS_COUNT = 4

REFERENCE_REPRESENTATIVES = {
    2: [
        "(0,0)", "(e1,e1)", "(e2,e1)", "(e1,e1+e2)",
        "(e2,0)", "(e1+e2,e1+e2)", "(e2,e1+e2)", "(e1,e2)",
        "(e1,0)",
    ],
    3: [
        "(0,0)", "(e1+e2,2e1+2e2)", "(e2,e1+2e2)", "(e1,e2)",
        "(e2,0)", "(e1,e1)", "(e1+e2,2e1+e2)",
        "(e1,0)", "(e2,e1)", "(e1,e1+e2)",
        "(e1,2e1)", "(e2,e1+e2)", "(e1,2e1+e2)",
    ],
    5: [
        "(0,0)", "(e2,e1)", "(e1+e2,e1+3e2)", "(e1,e1+e2)",
        "(e2,0)", "(e2,e1+e2)", "(e1+e2,e1+4e2)", "(e1,2e1+e2)",
        "(e1,0)", "(e2,e1+2e2)", "(e1+e2,2e1+e2)", "(e1,3e1+e2)",
        "(e1,e1)", "(e2,e1+3e2)", "(e1+e2,3e1+e2)", "(e1,4e1+e2)",
        "(e1+e2,4e1+4e2)", "(e2,e1+4e2)", "(e1+e2,2e1+3e2)", "(e1,e2)",
        "(e1,2e1)", "(e1+e2,e1+2e2)", "(e1+e2,3e1+2e2)",
    ],
    7: [
        "(0,0)", "(e2,2e1+e2)", "(e1+e2,e1+2e2)", "(e1+e2,3e1+5e2)",
        "(e1,0)", "(e2,2e1+3e2)", "(e1+e2,e1+3e2)", "(e1+e2,3e1+6e2)",
        "(e2,0)", "(e2,3e1+e2)", "(e1+e2,e1+4e2)", "(e1+e2,4e1+3e2)",
        "(e1,e1)", "(e2,3e1+3e2)", "(e1+e2,e1+5e2)", "(e1+e2,4e1+5e2)",
        "(e1,2e1)", "(e1,e1+e2)", "(e1+e2,e1+6e2)", "(e1+e2,4e1+6e2)",
        "(e1,3e1)", "(e1,e1+2e2)", "(e1+e2,2e1+e2)", "(e1+e2,6e1+3e2)",
        "(e1,e2)", "(e1,e1+3e2)", "(e1+e2,2e1+3e2)", "(e1+e2,6e1+5e2)",
        "(e2,e1)", "(e1,3e1+e2)", "(e1+e2,2e1+4e2)", "(e1+e2,6e1+6e2)",
        "(e2,e1+e2)", "(e1,3e1+2e2)", "(e1+e2,2e1+5e2)",
        "(e2,e1+3e2)", "(e1,3e1+3e2)", "(e1+e2,2e1+6e2)",
    ],
}
