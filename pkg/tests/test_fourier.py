import cmath
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cubeforms.errors import InvalidInput
from cubeforms.forms import LinearForm, combine
from cubeforms.fourier import (
    TOLERANCE,
    bias_bound,
    coefficient,
    equidistribution_check,
    fourier_average,
    fourier_coefficient,
)
from cubeforms.fp import Alphabet
from oracles import brute_joint
from strategies import forms

S01 = Alphabet.of(3, [0, 1])
W3 = cmath.exp(2j * cmath.pi / 3)


def test_coefficient_examples():
    x0 = [LinearForm.var(3, 0)]
    assert fourier_coefficient(x0, [0], [0], S01) == 1
    v = fourier_coefficient(x0, [0], [1], S01)
    assert v == pytest.approx((1 + W3) / 2) and abs(v) == pytest.approx(0.5)
    v = fourier_coefficient(x0, [1], [1], S01)
    assert v == pytest.approx(W3 ** -1 * (1 + W3) / 2)
    c = coefficient(x0, [0], [1], S01)
    assert abs(c.value) <= c.magnitude_bound + TOLERANCE
    with pytest.raises(InvalidInput):
        fourier_coefficient(x0, [0, 1], [1], S01)


def test_bias_bound_examples():
    f = LinearForm.var(3, 0)
    assert bias_bound([f, f], [1, 2]) == 1.0
    assert bias_bound([LinearForm.block(3, range(3))], [1]) == pytest.approx((8 / 9) ** 3)
    with pytest.raises(InvalidInput):
        bias_bound([f], [0])


def test_equidistribution_examples():
    rep = equidistribution_check([LinearForm.block(3, range(3))], [0], S01)
    assert rep.exact_prob == Fraction(1, 4) and rep.deviation == Fraction(1, 12)
    assert rep.bound == pytest.approx((8 / 9) ** 3) and rep.holds
    rep = equidistribution_check([LinearForm.zero(3)], [0], S01)
    assert rep.separation == 0 and rep.deviation == Fraction(2, 3) and rep.bound == 1 and rep.holds
    pair = [LinearForm.block(3, [0, 1]), LinearForm.block(3, [2, 3])]
    rep = equidistribution_check(pair, [1, 2], S01)
    assert rep.separation == 2 and rep.holds


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_inversion_and_bias(p, data):
    k = data.draw(st.integers(1, 3))
    fs = [data.draw(forms(p, n=5, max_terms=3)) for _ in range(k)]
    S = Alphabet.of(p, data.draw(st.sets(st.integers(0, p - 1), min_size=2)))
    y = tuple(data.draw(st.integers(0, p - 1)) for _ in range(k))
    counts, total = brute_joint(fs, S.elements, p)
    exact = Fraction(counts.get(y, 0), total)
    avg = fourier_average(fs, y, S)
    assert abs(avg.real - float(exact)) <= TOLERANCE and abs(avg.imag) <= TOLERANCE
    for a in product(range(p), repeat=k):
        if any(a):
            assert abs(fourier_coefficient(fs, y, a, S)) <= bias_bound(fs, a) + TOLERANCE
    rep = equidistribution_check(fs, y, S)
    assert rep.exact_prob == exact and rep.holds


def test_coefficient_ignores_cancelled_coordinates():
    f, g = LinearForm.block(3, [0, 1]), LinearForm.block(3, [0, 2])
    assert len(combine([1, 2], [f, g])) == 2
    assert abs(fourier_coefficient([f, g], [0, 0], [1, 2], S01)) == pytest.approx(0.25)
