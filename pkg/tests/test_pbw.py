"""Normal ordering onto the PBW basis, basis enumeration, characters."""

import random
from fractions import Fraction
from math import lcm

import pytest

from nlca.algebra import Presentation, TPoly
from nlca.algebra import render_tpoly
from nlca.calculus import Engine
from nlca.pbw import (PBWError, Reducer, character, enumerate_basis,
                      inversions, is_normally_ordered)

from conftest import CONCRETE
from randgen import random_mono, random_single, random_tensor


# -- inversion counting ------------------------------------------------------

def test_inversions_frozen(virasoro, free_fermion, affine_sl2):
    p = virasoro
    assert inversions(p, ()) == 0
    assert inversions(p, p.mono("L")) == 0
    assert inversions(p, p.mono("L", ("L", 1))) == 0
    assert inversions(p, p.mono(("L", 1), "L")) == 1
    assert inversions(p, p.mono(("L", 2), ("L", 1), "L")) == 3
    assert inversions(p, p.mono("L", "L")) == 0

    f = free_fermion
    # an adjacent equal odd pair counts as a violation
    assert inversions(f, f.mono("phi", "phi")) == 1
    assert inversions(f, f.mono(("phi", 1), "phi")) == 1
    assert inversions(f, f.mono("phi", "phi", "phi")) == 3

    s = affine_sl2
    assert inversions(s, s.mono("e", "h", "f")) == 0
    assert inversions(s, s.mono("h", "e")) == 1
    assert inversions(s, s.mono("f", "h", "e")) == 3


def test_is_normally_ordered(virasoro, free_fermion):
    p = virasoro
    assert is_normally_ordered(p, ())
    assert is_normally_ordered(p, p.mono("L", "L", ("L", 2)))
    assert not is_normally_ordered(p, p.mono(("L", 1), "L"))
    f = free_fermion
    assert not is_normally_ordered(f, f.mono("phi", "phi"))
    assert is_normally_ordered(f, f.mono("phi", ("phi", 1)))


# -- frozen reductions -------------------------------------------------------

def test_reduce_swap_virasoro(virasoro, reducers):
    p = virasoro
    got = reducers["virasoro"].normal_order(p.poly({p.mono(("L", 1), "L"): 1}))
    want = p.poly({
        p.mono("L", ("L", 1)): 1,
        p.mono(("L", 3)): Fraction(-1, 6),
    })
    assert got == want
    assert render_tpoly(got) == "-1/6*:T^3 L: + :L T L:"


def test_reduce_odd_repeat_fermion(free_fermion, reducers):
    # phi (x) phi rewrites to (1/2) N(lie(phi, phi), 1), and that bracket
    # integrates to zero
    f = free_fermion
    assert reducers["free_fermion"].normal_order(
        f.poly({f.mono("phi", "phi"): 1})).is_zero


def test_reduce_fixes_ordered_input(presentations, reducers):
    rng = random.Random(11)
    for name in CONCRETE:
        p, red = presentations[name], reducers[name]
        for _ in range(10):
            mono = random_mono(p, rng)
            if not is_normally_ordered(p, mono):
                continue
            x = p.poly({mono: 1})
            assert red.normal_order(x) == x


def test_reduce_idempotent_and_ordered(presentations, reducers):
    rng = random.Random(12)
    for name in CONCRETE:
        p, red = presentations[name], reducers[name]
        for _ in range(8):
            x = random_tensor(p, rng, 2, 3)
            y = red.normal_order(x)
            assert red.normal_order(y) == y
            for mono in y.terms:
                assert is_normally_ordered(p, mono)


def test_reduce_preserves_weight_and_parity(presentations, reducers):
    rng = random.Random(13)
    for name in CONCRETE:
        p, red = presentations[name], reducers[name]
        for _ in range(8):
            mono = random_mono(p, rng)
            y = red.normal_order(p.poly({mono: 1}))
            for out in y.terms:
                assert p.mono_weight(out) == p.mono_weight(mono)
                assert p.mono_parity(out) == p.mono_parity(mono)


def test_reduce_is_linear(virasoro, reducers):
    p = virasoro
    red = reducers["virasoro"]
    rng = random.Random(14)
    x, y = random_tensor(p, rng), random_tensor(p, rng)
    c = p.field.param("c")
    assert red.normal_order(x.scale(c) + y) == \
        red.normal_order(x).scale(c) + red.normal_order(y)


# -- the kernel of sigma -----------------------------------------------------

def test_sigma_kills_m_elements(presentations, engines, reducers):
    rng = random.Random(15)
    for name in CONCRETE:
        p, e, red = presentations[name], engines[name], reducers[name]
        for _ in range(5):
            A = random_tensor(p, rng, terms=1, max_factors=1)
            D = random_tensor(p, rng, max_factors=2)
            rb = random_mono(p, rng, 1, False)[0]
            rc = random_mono(p, rng, 1, False)[0]
            assert red.normal_order(e.m_element(A, rb, rc, D)).is_zero


def test_sigma_constant_on_m_cosets(presentations, engines, reducers):
    # adding an element of the span of A (x) sn(b, c, D) never changes
    # the normal form
    rng = random.Random(16)
    for name in CONCRETE:
        p, e, red = presentations[name], engines[name], reducers[name]
        for _ in range(4):
            x = random_tensor(p, rng, 2, 3)
            A = random_tensor(p, rng, terms=1, max_factors=1)
            D = random_tensor(p, rng, max_factors=2)
            rb = random_mono(p, rng, 1, False)[0]
            rc = random_mono(p, rng, 1, False)[0]
            shifted = x + e.m_element(A, rb, rc, D).scale(Fraction(3, 2))
            assert red.normal_order(shifted) == red.normal_order(x)


# -- strategy independence ---------------------------------------------------

def _random_strategy_reduce(engine, rng, x):
    out = engine.pres.zero()
    for mono, s in x.terms.items():
        out = out + _random_strategy_mono(engine, rng, mono).scale(s)
    return out


def _random_strategy_mono(engine, rng, E):
    """Rewrite a random violation instead of the leftmost one."""
    pres = engine.pres
    spots = []
    for pos in range(len(E) - 1):
        ka, kb = pres.rgen_key(E[pos]), pres.rgen_key(E[pos + 1])
        if ka > kb or (ka == kb and pres.rgen_parity(E[pos])):
            spots.append(pos)
    if not spots:
        return TPoly(pres, {E: pres.field.one})
    pos = rng.choice(spots)
    a, b = E[pos], E[pos + 1]
    prefix, suffix = E[:pos], E[pos + 2:]
    ab = engine.lie(TPoly(pres, {(a,): pres.field.one}),
                    TPoly(pres, {(b,): pres.field.one}))
    corr = TPoly(pres, {prefix: pres.field.one}).tensor(
        engine.nprod(ab, TPoly(pres, {suffix: pres.field.one})))
    if pres.rgen_key(a) > pres.rgen_key(b):
        swapped = prefix + (b, a) + suffix
        sign = pres.parity_sign((a,), (b,))
        return _random_strategy_mono(engine, rng, swapped).scale(sign) \
            + _random_strategy_reduce(engine, rng, corr)
    return _random_strategy_reduce(engine, rng, corr).scale(Fraction(1, 2))


def test_normal_form_is_strategy_independent(presentations, engines, reducers):
    rng = random.Random(17)
    for name in CONCRETE:
        p, e, red = presentations[name], engines[name], reducers[name]
        for _ in range(6):
            x = random_tensor(p, rng, 2, 3)
            assert _random_strategy_reduce(e, rng, x) == red.normal_order(x)


# -- the descent monitor -----------------------------------------------------

def test_descent_monitor_counts(virasoro):
    p = virasoro
    red = Reducer(Engine(p))
    red.normal_order(p.poly({p.mono(("L", 1), "L"): 1}))
    assert red.descent_checks == 1
    unchecked = Reducer(Engine(p, checked=False))
    unchecked.normal_order(p.poly({p.mono(("L", 1), "L"): 1}))
    assert unchecked.descent_checks == 0


# -- basis enumeration -------------------------------------------------------

def test_enumerate_basis_virasoro(virasoro):
    p = virasoro
    assert enumerate_basis(p, 0) == [()]
    assert enumerate_basis(p, 1) == []
    assert enumerate_basis(p, 2) == [p.mono("L")]
    assert enumerate_basis(p, 3) == [p.mono(("L", 1))]
    assert enumerate_basis(p, 4) == [p.mono("L", "L"), p.mono(("L", 2))]
    assert enumerate_basis(p, 6) == [
        p.mono("L", "L", "L"),
        p.mono("L", ("L", 2)),
        p.mono(("L", 1), ("L", 1)),
        p.mono(("L", 4)),
    ]
    assert enumerate_basis(p, -1) == []
    assert enumerate_basis(p, Fraction(5, 2)) == []


def test_enumerate_basis_w3(w3):
    p = w3
    assert enumerate_basis(p, 3) == [p.mono(("L", 1)), p.mono("W")]
    assert enumerate_basis(p, 5) == [
        p.mono("L", ("L", 1)),
        p.mono("L", "W"),
        p.mono(("L", 3)),
        p.mono(("W", 2)),
    ]


def test_enumerate_basis_fermion_no_repeats(free_fermion):
    f = free_fermion
    assert enumerate_basis(f, 1) == []
    assert enumerate_basis(f, 2) == [f.mono("phi", ("phi", 1))]
    for mono in enumerate_basis(f, Fraction(9, 2)):
        assert is_normally_ordered(f, mono)


def test_enumerate_basis_outputs_are_ordered(presentations):
    for name in CONCRETE:
        p = presentations[name]
        for w in range(7):
            basis = enumerate_basis(p, w)
            assert len(set(basis)) == len(basis)
            for mono in basis:
                assert is_normally_ordered(p, mono)
                assert p.mono_weight(mono) == w


def test_basis_requires_weights():
    p = Presentation([("x", 0, 1, None)])
    p.set_bracket("x", "x", {})
    with pytest.raises(PBWError):
        enumerate_basis(p, 2)
    with pytest.raises(PBWError):
        character(p, 2)
    q = Presentation([("x", 0, 1, 0)])
    q.set_bracket("x", "x", {})
    with pytest.raises(PBWError):
        enumerate_basis(q, 2)


# -- characters --------------------------------------------------------------

def dims_by_partition_count(pres, max_weight):
    """Graded dimensions via a bounded-knapsack count over the T^n-shifted
    generator weights: even generators repeat freely, odd ones are 0/1.
    Independent of the basis enumerator."""
    scale = lcm(*(g.weight.denominator for g in pres.generators))
    top = int(Fraction(max_weight) * scale)
    series = [0] * (top + 1)
    series[0] = 1
    for g in pres.generators:
        m = int(g.weight * scale)
        while m <= top:
            if g.parity:
                for i in range(top, m - 1, -1):
                    series[i] += series[i - m]
            else:
                for i in range(m, top + 1):
                    series[i] += series[i - m]
            m += scale
    return {Fraction(i, scale): d for i, d in enumerate(series)}


def test_character_matches_partition_count(presentations):
    for name in CONCRETE:
        p = presentations[name]
        assert character(p, 6) == dims_by_partition_count(p, 6)


def test_character_virasoro_frozen(virasoro):
    got = character(virasoro, 8)
    assert [got[Fraction(w)] for w in range(9)] == [1, 0, 1, 1, 2, 2, 4, 4, 7]


def test_character_fermion_half_integer_lattice(free_fermion):
    got = character(free_fermion, 4)
    want = {
        Fraction(0): 1, Fraction(1, 2): 1, Fraction(1): 0,
        Fraction(3, 2): 1, Fraction(2): 1, Fraction(5, 2): 1,
        Fraction(3): 1, Fraction(7, 2): 1, Fraction(4): 2,
    }
    assert got == want


def test_character_w3_frozen(w3):
    got = character(w3, 6)
    assert [got[Fraction(w)] for w in range(7)] == [1, 0, 1, 2, 3, 4, 8]
