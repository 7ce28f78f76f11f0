import pytest
from hypothesis import given, settings, strategies as st

from cubeforms.errors import EnumerationTooLarge, InvalidInput
from cubeforms.forms import (
    ConditionSystem,
    LinearForm,
    combine,
    distance,
    meets_main_assumption,
    min_affine_support,
    pairwise_min_distance,
    projective_count,
    separation,
    support,
)
from oracles import brute_separation, combination_support
from strategies import forms

V = LinearForm.var


def f3(**kw):
    return LinearForm.from_dict(3, {int(k[1:]): v for k, v in kw.items()})


def test_normalisation_and_support():
    phi = LinearForm(3, ((3, 2), (0, 1), (5, 3), (0, 3)))
    assert phi.terms == ((0, 1), (3, 2))
    assert support(phi) == {0, 3}
    assert support(LinearForm.zero(3)) == frozenset()
    psi = f3(x1=1, x2=1)
    assert support(psi - psi) == frozenset()
    with pytest.raises(InvalidInput):
        LinearForm(3, ((-1, 1),))
    with pytest.raises(InvalidInput):
        LinearForm(4, ())


def test_evaluate_restrict_str():
    phi = f3(x0=1, x2=2)
    assert phi([1, 0, 1]) == 0
    assert phi({2: 1}) == 2
    rest, c = phi.restrict({0: 1})
    assert rest == f3(x2=2) and c == 1
    assert str(phi) == "x0 + 2*x2" and str(LinearForm.zero(3)) == "0"
    assert 2 * phi == phi.scale(2)


def test_combine_examples():
    a, b = f3(x0=1, x1=1), f3(x0=1, x2=1)
    assert combine([1, 2], [a, b]) == f3(x1=1, x2=2)
    assert combine([0, 0], [a, b]).is_zero()
    assert combine([1], [a]) == a
    with pytest.raises(InvalidInput):
        combine([1], [a, b])


def test_distance_examples():
    a, b = f3(x0=1, x1=1), f3(x0=1, x2=1)
    assert distance(a, b) == 2 and distance(a, a) == 0
    assert distance(f3(x0=1, x1=1), f3(x2=1, x3=2, x4=1)) == 5


def test_pairwise_min_distance():
    sys_ = ConditionSystem.build(3, [0, 1], [({0: 1}, [0]), ({1: 1}, [0]), ({0: 1, 1: 1}, [0])])
    # x0 - (x0 + x1) = -x1 has support 1
    assert pairwise_min_distance(sys_) == 1
    dup = ConditionSystem.build(3, [0, 1], [({0: 1}, [0]), ({0: 1}, [1])])
    assert pairwise_min_distance(dup) == 0
    with pytest.raises(InvalidInput):
        pairwise_min_distance(ConditionSystem.build(3, [0, 1], [({0: 1}, [0])]))


def test_separation_examples():
    assert separation([f3(x0=1, x1=1), f3(x0=1, x2=1)]) == 2
    assert separation([LinearForm.zero(3)]) == 0
    assert separation([V(3, i) for i in range(5)]) == 1
    with pytest.raises(EnumerationTooLarge):
        separation([V(3, i) for i in range(20)], enumeration_cap=1000)
    assert projective_count(3, 3) == 13


def test_min_affine_support_lexicographic():
    target = f3(x0=1)
    best, vec = min_affine_support(target, [f3(x0=2), f3(x0=1)])
    assert best == 0 and vec == (0, 2)


def test_main_assumption():
    one = ConditionSystem.build(3, [0, 1], [({0: 1}, [0])])
    assert meets_main_assumption(one).holds
    tight = ConditionSystem.build(5, [0, 1], [({0: 1, 1: 1}, [0, 1, 2]), ({2: 1, 3: 1}, [0, 1, 2])])
    rep = meets_main_assumption(tight)
    assert (rep.holds, rep.threshold, rep.min_distance, rep.Lmax) == (False, 5, 4, 3)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_separation_matches_brute_force(p, data):
    k = data.draw(st.integers(1, 3))
    fs = [data.draw(forms(p)) for _ in range(k)]
    assert separation(fs) == brute_separation(fs, p)
    if k >= 2:
        assert separation(fs) <= pairwise_min_distance(fs)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_distance_is_metric(p, data):
    a, b, c = (data.draw(forms(p)) for _ in range(3))
    assert distance(a, b) == distance(b, a)
    assert (distance(a, b) == 0) == (a == b)
    assert distance(a, c) <= distance(a, b) + distance(b, c)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_support_scaling(p, data):
    f = data.draw(forms(p))
    c = data.draw(st.integers(1, p - 1))
    assert support(f.scale(c)) == support(f)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_separation_invariant_under_change_of_basis(p, data):
    k = data.draw(st.integers(2, 3))
    fs = [data.draw(forms(p)) for _ in range(k)]
    # random invertible matrix: identity followed by elementary row operations
    M = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(data.draw(st.integers(1, 6))):
        i, j = data.draw(st.integers(0, k - 1)), data.draw(st.integers(0, k - 1))
        c = data.draw(st.integers(1, p - 1))
        if i == j:
            M[i] = [c * v % p for v in M[i]]
        else:
            M[i] = [(a + c * b) % p for a, b in zip(M[i], M[j])]
    assert _det(M, p) % p
    gs = [combine(row, fs) for row in M]
    assert separation(gs) == separation(fs)


def _det(M, p):
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([r[:j] + r[j + 1:] for r in M[1:]], p) for j in range(len(M)))


def test_oracle_support_helper():
    assert combination_support((1, 2), [f3(x0=1, x1=1), f3(x0=1, x2=1)], 3) == 2
