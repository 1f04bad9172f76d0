import random
from fractions import Fraction

import pytest

from nlca.algebra import apply_T
from nlca.formal import (
    LPoly, differentiate, exp_T_dlambda_expand, expand_var_to_pair,
    integrate_upper, render_lpoly, subst_neg_lambda_minus_T)

from builders import make_virasoro


@pytest.fixture(scope="module")
def vir():
    return make_virasoro()


def LL(vir):
    return vir.bracket_r(vir.rgen("L"), vir.rgen("L"))


def random_lpoly(pres, rng, vars=("lambda",)):
    monos = [(), (pres.rgen("L"),), (pres.rgen("L", 1),),
             (pres.rgen("L"), pres.rgen("L"))]
    terms = {}
    for _ in range(rng.randint(1, 4)):
        e = tuple(rng.randint(0, 3) for _ in vars)
        x = pres.poly({rng.choice(monos): Fraction(rng.randint(-5, 5), rng.randint(1, 3))})
        if not x.is_zero:
            terms[e] = terms.get(e, pres.zero()) + x
    return LPoly(pres, vars, {e: x for e, x in terms.items() if not x.is_zero})


def test_integrate_new_upper_var(vir):
    p = LPoly(vir, ("lambda",), {(2,): vir.gen("L")})
    q = integrate_upper(p, "lambda", "mu")
    assert q.vars == ("mu",)
    assert q.coeff((3,)) == vir.gen("L").scale(Fraction(1, 3))
    assert len(q.terms) == 1


def test_integrate_existing_upper_var(vir):
    # integral of lambda^2 mu L d mu from 0 to lambda
    p = LPoly(vir, ("lambda", "mu"), {(2, 1): vir.gen("L")})
    q = integrate_upper(p, "mu", "lambda")
    assert q.vars == ("lambda",)
    assert q.coeff((4,)) == vir.gen("L").scale(Fraction(1, 2))


def test_integrate_pairs_mode(vir):
    pairs = integrate_upper(LL(vir), "lambda", "T")
    c = vir.field.param("c")
    assert [(m, X) for m, X in pairs] == [
        (0, vir.gen("L", 1)),
        (1, vir.gen("L").scale(2)),
        (3, vir.unit().scale(c / 12)),
    ]


def test_integrate_minus_T_to_zero(vir):
    # this is the Lie-bracket integral; for [L_lambda L] it vanishes
    q = integrate_upper(LL(vir), "lambda", None)
    assert q.vars == ()
    assert q.is_zero


def test_integrate_minus_T_single_term(vir):
    p = LPoly(vir, ("lambda",), {(1,): vir.gen("L")})
    q = integrate_upper(p, "lambda", None)
    assert q.constant() == vir.gen("L", 2).scale(Fraction(-1, 2))


def test_integral_linearity(vir):
    rng = random.Random(31)
    c = vir.field.param("c")
    for mode in ("mu", None):
        for _ in range(15):
            a, b = random_lpoly(vir, rng), random_lpoly(vir, rng)
            s = c * rng.randint(-3, 3) + rng.randint(-2, 2)
            lhs = integrate_upper(a.scale(s) + b, "lambda", mode)
            rhs = integrate_upper(a, "lambda", mode).scale(s) + integrate_upper(b, "lambda", mode)
            assert lhs == rhs


def test_differentiate_undoes_integral(vir):
    rng = random.Random(77)
    for _ in range(15):
        p = random_lpoly(vir, rng)
        q = integrate_upper(p, "lambda", "mu")
        back = differentiate(q, "mu")
        # rename mu back to lambda for comparison
        assert back.terms == p.terms
        assert back.vars == ("mu",)


def test_subst_neg_lambda_minus_T_virasoro_skew(vir):
    # [L_lambda L] is skew: substituting -lambda-T negates it
    lp = LL(vir)
    assert subst_neg_lambda_minus_T(lp, "lambda") == -lp


def test_subst_neg_lambda_minus_T_involution(vir):
    rng = random.Random(13)
    for _ in range(20):
        p = random_lpoly(vir, rng)
        q = subst_neg_lambda_minus_T(subst_neg_lambda_minus_T(p, "lambda"), "lambda")
        assert q == p


def test_expand_var_to_sum(vir):
    p = LPoly(vir, ("nu",), {(3,): vir.gen("L")})
    q = expand_var_to_pair(p, "nu", "lambda", "mu", 1)
    assert q.vars == ("lambda", "mu")
    assert q.coeff((3, 0)) == vir.gen("L")
    assert q.coeff((2, 1)) == vir.gen("L").scale(3)
    assert q.coeff((1, 2)) == vir.gen("L").scale(3)
    assert q.coeff((0, 3)) == vir.gen("L")


def test_expand_var_to_difference(vir):
    p = LPoly(vir, ("nu",), {(2,): vir.gen("L")})
    q = expand_var_to_pair(p, "nu", "lambda", "mu", -1)
    assert q.coeff((2, 0)) == vir.gen("L")
    assert q.coeff((1, 1)) == vir.gen("L").scale(-2)
    assert q.coeff((0, 2)) == vir.gen("L")


def test_exp_T_dlambda_divided_powers(vir):
    out = exp_T_dlambda_expand(vir.gen("L"), 2)
    assert out == [
        (2, vir.gen("L")),
        (1, vir.gen("L", 1)),
        (0, vir.gen("L", 2).scale(Fraction(1, 2))),
    ]
    assert exp_T_dlambda_expand(vir.unit(), 1) == [(1, vir.unit()), (0, vir.zero())]


def test_shift_and_coeff_access(vir):
    p = LPoly.from_tpoly(vir.gen("L"), ("lambda",))
    q = p.shift("lambda", 2)
    assert q.coeff((2,)) == vir.gen("L")
    assert q.var_degree("lambda") == 2
    assert p.constant() == vir.gen("L")


def test_with_vars_reindexing(vir):
    p = LPoly(vir, ("lambda",), {(2,): vir.gen("L")})
    q = p.with_vars(("lambda", "mu"))
    assert q.coeff((2, 0)) == vir.gen("L")
    assert q.coeff((0, 2)).is_zero


def test_render_lpoly(vir):
    s = render_lpoly(LL(vir))
    assert s == ":T L: + 2*lambda*:L: + c/12*lambda^3*1"
    p = LPoly(vir, ("lambda", "mu"), {(1, 1): vir.gen("L").scale(-1)})
    assert render_lpoly(p) == "-lambda*mu*:L:"
    assert render_lpoly(LPoly(vir, ("lambda",))) == "0"


def test_coeff_list_round_trip(vir):
    lst = LL(vir).coeff_list()
    assert len(lst) == 4
    rebuilt = LPoly.from_coeff_list(vir, "lambda", lst)
    assert rebuilt == LL(vir)
