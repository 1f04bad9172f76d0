"""Programmatic presentation constructors used across the test suite.

These are built directly through the algebra API, independent of the DSL
files bundled with the package; the frontend tests compare the two.
"""

from fractions import Fraction

from nlca.algebra import Presentation


def make_virasoro():
    p = Presentation([("L", 0, 2, 2)], params=("c",), name="virasoro")
    c = p.field.param("c")
    p.set_bracket("L", "L", {
        0: p.gen("L", 1),
        1: p.gen("L").scale(2),
        3: p.unit().scale(c / 12),
    })
    return p


def make_free_boson():
    p = Presentation([("a", 0, 1, 1)], name="free_boson")
    p.set_bracket("a", "a", {1: p.unit()})
    return p


def make_free_fermion():
    p = Presentation([("phi", 1, 1, Fraction(1, 2))], name="free_fermion")
    p.set_bracket("phi", "phi", {0: p.unit()})
    return p


def make_affine_sl2():
    p = Presentation([("e", 0, 1, 1), ("h", 0, 1, 1), ("f", 0, 1, 1)],
                     params=("k",), name="affine_sl2")
    k = p.field.param("k")
    p.set_bracket("h", "h", {1: p.unit().scale(2 * k)})
    p.set_bracket("h", "e", {0: p.gen("e").scale(2)})
    p.set_bracket("h", "f", {0: p.gen("f").scale(-2)})
    p.set_bracket("e", "f", {0: p.gen("h"), 1: p.unit().scale(k)})
    p.set_bracket("e", "e", {})
    p.set_bracket("f", "f", {})
    return p


def _w3_table(p, alpha, beta, gamma, delta, epsilon):
    c = p.field.param("c")
    p.set_bracket("L", "L", {
        0: p.gen("L", 1),
        1: p.gen("L").scale(2),
        3: p.unit().scale(c / 12),
    })
    p.set_bracket("L", "W", {0: p.gen("W", 1), 1: p.gen("W").scale(3)})
    LL = p.poly({p.mono(("L", 1), "L"): alpha, p.mono("L", ("L", 1)): alpha})
    p.set_bracket("W", "W", {
        0: LL + p.gen("W", 2).scale(beta) + p.gen("L", 3).scale(gamma),
        1: (p.poly({p.mono("L", "L"): 2 * alpha})
            + p.gen("W", 1).scale(2 * beta)
            + p.gen("L", 2).scale(2 * gamma + delta)),
        2: p.gen("L", 1).scale(3 * delta),
        3: p.gen("L").scale(2 * delta),
        5: p.unit().scale(epsilon),
    })


def make_w3():
    p = Presentation([("L", 0, 2, 2), ("W", 0, 3, 3)], params=("c",), name="w3")
    c = p.field.param("c")
    _w3_table(p, 16 / (22 + 5 * c), p.field.zero, (c - 10) / (3 * (22 + 5 * c)),
              p.field.convert(Fraction(1, 6)), c / 360)
    return p


def make_w3_ansatz():
    p = Presentation([("L", 0, 2, 2), ("W", 0, 3, 3)], params=("c",),
                     unknowns=("alpha", "beta", "gamma", "delta", "epsilon"),
                     name="w3_ansatz")
    f = p.field
    _w3_table(p, f.param("alpha"), f.param("beta"), f.param("gamma"),
              f.param("delta"), f.param("epsilon"))
    return p


BUILDERS = {
    "virasoro": make_virasoro,
    "free_boson": make_free_boson,
    "free_fermion": make_free_fermion,
    "affine_sl2": make_affine_sl2,
    "w3": make_w3,
    "w3_ansatz": make_w3_ansatz,
}
