import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cubeforms.density import satisfying_density
from cubeforms.errors import InvalidInput, PetalTooSmall
from cubeforms.forms import ConditionSystem, LinearForm, meets_main_assumption
from cubeforms.fp import Alphabet
from cubeforms.rng import SplitMix64
from cubeforms.structure import (
    EquidistributionCertificate,
    SunflowerCertificate,
    _sunflower_certificate,
    ball_cover,
    balls_density_bound,
    certify_density_bound,
    epsilon_accounting,
    extract_sunflower,
    extraction_threshold,
    greedy_separated_subfamily,
    parameters_from_epsilon,
    sunflower_density_bound,
    verify_certificate,
)
from oracles import brute_density, is_sunflower, max_sunflower_size

V = LinearForm.var
S01 = Alphabet.of(3, [0, 1])


def singletons(k, E=(0,)):
    return ConditionSystem.build(3, [0, 1], [({i: 1}, list(E)) for i in range(k)])


def sunflower_system(k, petal=2, center=((0, 1), (1, 1)), p=3, E=(0,)):
    base = max(z for z, _ in center) + 1
    pairs = []
    for i in range(k):
        coeffs = dict(center)
        for j in range(petal):
            coeffs[base + petal * i + j] = 1
        pairs.append((coeffs, list(E)))
    return ConditionSystem.build(p, [0, 1], pairs)


def test_sunflower_density_bound_singletons():
    for k in range(1, 9):
        sys_ = singletons(k)
        cert = _sunflower_certificate(sys_, list(range(k)), LinearForm.zero(3))
        b = sunflower_density_bound(cert, sys_)
        assert b == 3 * Fraction(3, 4) ** k
        assert b >= satisfying_density(sys_) == Fraction(1, 2 ** k)
    empty = _sunflower_certificate(singletons(2), [], LinearForm.zero(3))
    assert sunflower_density_bound(empty, singletons(2)) == 3


def test_sunflower_density_bound_petal_too_small():
    # E = {0, 1} needs petals of support >= 2
    sys_ = singletons(3, E=(0, 1))
    cert = _sunflower_certificate(sys_, [0, 1, 2], LinearForm.zero(3))
    with pytest.raises(PetalTooSmall):
        sunflower_density_bound(cert, sys_)


def test_extract_examples():
    six = [V(3, i) for i in range(6)]
    ext = extract_sunflower(six, 1, 2)
    assert len(ext.indices) >= 2 and ext.offset.is_zero() and not ext.best_effort
    psi = LinearForm.block(3, [0, 1])
    ext = extract_sunflower([psi] * 5, 2, 5)
    assert ext.indices == tuple(range(5)) and ext.offset == psi
    zeros = [LinearForm.zero(3)] * 4
    ext = extract_sunflower(zeros, 0, 4)
    assert ext.indices == tuple(range(4)) and ext.offset.is_zero()
    assert extract_sunflower([], 1, 1, p=5).offset.p == 5


def test_extract_best_effort_flag():
    # three forms sharing x0 with different coefficients: no 3-sunflower at radius 1
    fs = [V(3, 0), V(3, 0, 2), V(3, 1)]
    ext = extract_sunflower(fs, 1, 3)
    assert ext.best_effort and len(ext.indices) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([(1, 2), (1, 3), (2, 2)]))
def test_extract_guarantee_random(seed, rt):
    r, t = rt
    p = 3
    k = extraction_threshold(p, r, t)
    g = SplitMix64(seed)
    n = 2 * r + 2
    petals = []
    for _ in range(k):
        size = 1 + g.below(r)
        coords = sorted(g.below(n) for _ in range(size))
        petals.append(LinearForm(p, tuple((z, 1 + g.below(p - 1)) for z in coords)))
    petals = [f if len(f) <= r else LinearForm(p, f.terms[:r]) for f in petals]
    ext = extract_sunflower(petals, r, t)
    assert len(ext.indices) >= t and not ext.best_effort
    assert is_sunflower([petals[i] - ext.offset for i in ext.indices])


def test_extract_vs_exhaustive_small():
    g = SplitMix64(3)
    for _ in range(20):
        petals = [LinearForm(3, ((g.below(4), 1 + g.below(2)),)) for _ in range(5)]
        ext = extract_sunflower(petals, 1, 5)
        assert len(ext.indices) <= max_sunflower_size(petals, 3)
        assert is_sunflower([petals[i] - ext.offset for i in ext.indices])


def test_greedy_examples():
    disjoint = [LinearForm.block(3, range(2 * i, 2 * i + 2)) for i in range(5)]
    res = greedy_separated_subfamily(disjoint, 2, 3)
    assert res.complete and res.members == (0, 1, 2)
    ex1 = [LinearForm.block(3, [0, i]) for i in range(1, 6)]
    res = greedy_separated_subfamily(ex1, 2, 10)
    assert len(res.members) >= 2 and not res.complete
    # every form has support 2 < 3, so not even one is 3-separated
    res = greedy_separated_subfamily(ex1, 3, 10)
    assert res.members == () and set(res.assignment) == {0, 1, 2, 3, 4}
    res = greedy_separated_subfamily([LinearForm.block(3, [0, 1, i]) for i in range(2, 6)], 3, 10)
    assert len(res.members) == 1 and set(res.assignment) == {1, 2, 3}
    res = greedy_separated_subfamily([], 2, 1)
    assert res.members == () and not res.complete


def test_ball_cover_one_bucket():
    fs = [LinearForm.block(3, [0, 1, 2 + i]) for i in range(4)]
    res = greedy_separated_subfamily(fs, 3, 4)
    buckets = ball_cover(fs, res.members, res.assignment)
    assert len(buckets) == 1 and list(buckets.values())[0] == [0, 1, 2, 3]
    with pytest.raises(InvalidInput):
        ball_cover(fs, [], {})


def test_balls_bound_examples():
    assert balls_density_bound(12, 1, 3, S01) == pytest.approx(3 * 0.75 ** 4)
    assert balls_density_bound(2, 2, 3, S01) < 3
    vals = [balls_density_bound(k, 2, 3, S01) for k in (10, 100, 1000)]
    assert vals == sorted(vals, reverse=True)


def test_parameters_from_epsilon():
    u, r = parameters_from_epsilon(3, 0.25)
    assert u == 7 == math.ceil(3 * math.log(8)) and r == math.ceil(5 * 81 * math.log(8))
    with pytest.raises(InvalidInput):
        parameters_from_epsilon(3, 1.5)
    acc = epsilon_accounting(3, S01, 0.25)
    assert acc["log10_k_max"] == pytest.approx(sum(v for k, v in acc.items() if k != "log10_k_max"))


def test_case_a():
    sys_ = singletons(6)
    rep = certify_density_bound(sys_, 3, 1)
    assert rep.case == "A" and isinstance(rep.certificate, EquidistributionCertificate)
    assert rep.bound == Fraction(1, 27) + Fraction(8, 9)
    assert rep.exact_density == Fraction(1, 64) <= rep.bound
    assert verify_certificate(rep.certificate, sys_)


def test_case_b():
    sys_ = sunflower_system(8)
    rep = certify_density_bound(sys_, 3, 5)
    cert = rep.certificate
    assert rep.case == "B" and isinstance(cert, SunflowerCertificate)
    assert cert.bound == 3 * Fraction(3, 4) ** 8 and rep.exact_density <= rep.bound
    assert str(cert.center) == "x0 + x1"
    assert verify_certificate(cert, sys_)


def test_certify_rejects_assumption_failure():
    tight = ConditionSystem.build(5, [0, 1], [({0: 1, 1: 1}, [0, 1, 2]), ({2: 1, 3: 1}, [0, 1, 2])])
    with pytest.raises(InvalidInput):
        certify_density_bound(tight, 2, 2)
    with pytest.raises(InvalidInput):
        certify_density_bound(singletons(2), 0, 1)


def test_single_condition():
    sys_ = singletons(1)
    rep = certify_density_bound(sys_, 2, 1)
    assert rep.bound >= rep.exact_density
    assert verify_certificate(rep.certificate, sys_)


def test_verify_mutations():
    sys_ = sunflower_system(6)
    cert = certify_density_bound(sys_, 3, 5).certificate
    # perturb a petal coefficient
    bad_petal = LinearForm(3, cert.petals[0].terms[:-1] + ((cert.petals[0].terms[-1][0], 2),))
    mutated = SunflowerCertificate(cert.center, cert.member_indices, (bad_petal,) + cert.petals[1:],
                                   cert.min_petal_support, cert.bound)
    assert "petal identity" in verify_certificate(mutated, sys_).reasons
    # inflate t'
    inflated = SunflowerCertificate(cert.center, cert.member_indices, cert.petals,
                                    cert.min_petal_support, 3 * Fraction(3, 4) ** 7)
    assert "bound mismatch" in verify_certificate(inflated, sys_).reasons
    # overlapping petals: move the center so that petals share x0
    shifted = cert.center - V(3, 0)
    petals = tuple(sys_.forms[i] - shifted for i in cert.member_indices)
    overl = SunflowerCertificate(shifted, cert.member_indices, petals,
                                 min(len(f) for f in petals), cert.bound)
    assert "disjointness" in verify_certificate(overl, sys_).reasons
    bad_idx = SunflowerCertificate(cert.center, (0, 0), cert.petals[:2], 2, cert.bound)
    assert not verify_certificate(bad_idx, sys_)
    a = certify_density_bound(singletons(4), 2, 1).certificate
    wrong_r = EquidistributionCertificate(a.member_indices, 2, a.per_tuple_bound, a.density_bound)
    reasons = verify_certificate(wrong_r, singletons(4)).reasons
    assert any(r.startswith("separation") for r in reasons) and "bound mismatch" in reasons
    assert verify_certificate(object(), sys_).reasons == ("unknown certificate kind",)


def test_verify_petal_too_small():
    sys_ = ConditionSystem.build(3, [0, 1], [({0: 1, 1 + i: 1}, [0, 1]) for i in range(4)])
    cert = _sunflower_certificate(sys_, [0, 1, 2, 3], V(3, 0))
    assert any(r.startswith("petal too small") for r in verify_certificate(cert, sys_).reasons)


def test_empty_petals_with_empty_targets():
    # E = {} has L* = 0, so petals of support 0 are admissible
    sys_ = ConditionSystem.build(3, [0, 1], [({0: 1, 1: 1}, []) for _ in range(3)])
    cert = _sunflower_certificate(sys_, [0, 1, 2], LinearForm.block(3, [0, 1]))
    assert cert.min_petal_support == 0
    assert verify_certificate(cert, sys_)
    assert sunflower_density_bound(cert, sys_) >= satisfying_density(sys_) == 0


def test_determinism():
    sys_ = sunflower_system(7)
    a = certify_density_bound(sys_, 3, 5)
    b = certify_density_bound(sys_, 3, 5)
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_soundness_random_spread_systems(seed):
    g = SplitMix64(seed)
    p = g.choice([3, 5])
    k = 1 + g.below(6)
    pairs = []
    for i in range(k):
        n = 1 + g.below(3)
        pairs.append(({3 * i + j: 1 + g.below(p - 1) for j in range(n)}, [g.below(p)]))
    sys_ = ConditionSystem.build(p, [0, 1], pairs)
    if not meets_main_assumption(sys_).holds:
        return
    rep = certify_density_bound(sys_, 2, 1 + g.below(3))
    assert rep.bound >= brute_density(sys_)
    assert verify_certificate(rep.certificate, sys_)
