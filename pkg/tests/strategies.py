"""Hypothesis strategies for small forms and systems."""

from hypothesis import strategies as st

from cubeforms.forms import Condition, ConditionSystem, LinearForm
from cubeforms.fp import Alphabet, TargetSet


@st.composite
def forms(draw, p, n=6, max_terms=4):
    coords = draw(st.lists(st.integers(0, n - 1), max_size=max_terms, unique=True))
    coeffs = draw(st.lists(st.integers(1, p - 1), min_size=len(coords), max_size=len(coords)))
    return LinearForm(p, tuple(zip(coords, coeffs)))


@st.composite
def systems(draw, p=None, n=6, max_k=4, max_terms=4):
    p = draw(st.sampled_from([3, 5])) if p is None else p
    S = draw(st.sets(st.integers(0, p - 1), min_size=2))
    k = draw(st.integers(0, max_k))
    conds = []
    for _ in range(k):
        f = draw(forms(p, n, max_terms))
        E = draw(st.sets(st.integers(0, p - 1), max_size=p - 1))
        conds.append(Condition(f, TargetSet.of(p, E)))
    return ConditionSystem(p, Alphabet.of(p, S), tuple(conds))
