"""Exact and Monte Carlo distributions of condition systems on S^N.

N is always the union of the supports involved: coordinates outside it do
not affect any probability.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _backend
from .errors import ConditioningOnNull, ExactEngineTooLarge, InvalidInput
from .forms import Condition, ConditionSystem, LinearForm, dense
from .fp import Alphabet
from .rng import shard_seed

DEFAULT_BUDGET = 10 ** 8
MC_SHARD = 1 << 16
_INT64_SAFE = 1 << 62


def default_budget() -> int:
    env = os.environ.get("CUBEFORMS_BUDGET")
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise InvalidInput(f"CUBEFORMS_BUDGET is not a number: {env!r}")
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class JointDistribution:
    p: int
    k: int
    counts: dict
    total: int

    def prob(self, y) -> Fraction:
        return Fraction(self.counts.get(tuple(y), 0), self.total)

    def probabilities(self) -> dict:
        return {y: Fraction(c, self.total) for y, c in self.counts.items()}

    def marginal(self, i: int) -> "JointDistribution":
        out = {}
        for y, c in self.counts.items():
            out[(y[i],)] = out.get((y[i],), 0) + c
        return JointDistribution(self.p, 1, out, self.total)

    def support(self) -> frozenset:
        return frozenset(self.counts)


@dataclass(frozen=True)
class DensityEstimate:
    estimate: float
    samples: int
    seed: int
    hoeffding_99: float
    hits: int

    def interval(self) -> tuple:
        return (max(0.0, self.estimate - self.hoeffding_99), min(1.0, self.estimate + self.hoeffding_99))


def hoeffding_halfwidth(samples: int, delta: float = 0.01) -> float:
    return math.sqrt(math.log(2 / delta) / (2 * samples))


def _kernels_for(total_bound: int):
    if total_bound < _INT64_SAFE:
        return _backend.kernels, np.int64
    return _backend.reference, object


def _alphabet_array(S: Alphabet):
    return np.array(sorted(S.elements), dtype=np.int64)


def _decode(index: int, p: int, k: int) -> tuple:
    digits = []
    for _ in range(k):
        index, d = divmod(index, p)
        digits.append(d)
    return tuple(reversed(digits))


def joint_distribution(system, budget: int | None = None, S: Alphabet | None = None) -> JointDistribution:
    """Exact distribution of (phi_1(x), ..., phi_k(x)) for x uniform on S^N.

    Accepts a ConditionSystem, or a list of forms together with ``S``.
    """
    if isinstance(system, ConditionSystem):
        forms, S = system.forms, system.S
        p = system.p
    else:
        forms = list(system)
        if S is None:
            raise InvalidInput("an alphabet is needed when passing bare forms")
        p = S.p
    budget = default_budget() if budget is None else budget
    k = len(forms)
    coords, mat = dense(forms)
    n = len(coords)
    cost = p ** k * max(n, 1) * len(S)
    if cost > budget:
        raise ExactEngineTooLarge(f"joint distribution needs {cost} state updates, budget {budget}")
    total = len(S) ** n
    kern, dtype = _kernels_for(total)
    counts = np.zeros(p ** k, dtype=dtype)
    counts[0] = 1
    alphabet = _alphabet_array(S)
    for j in range(n):
        counts = kern.convolve_step(counts, p, k, mat[:, j], alphabet)
    out = {_decode(i, p, k): int(c) for i, c in enumerate(counts.tolist()) if c}
    return JointDistribution(p, k, out, total)


def marginal_distribution(phi: LinearForm, S: Alphabet) -> JointDistribution:
    """Single-form distribution by direct convolution over F_p."""
    p = phi.p
    vec = [0] * p
    vec[0] = 1
    elems = sorted(S.elements)
    for _, c in phi.terms:
        new = [0] * p
        for v, cnt in enumerate(vec):
            if cnt:
                for s in elems:
                    new[(v + c * s) % p] += cnt
        vec = new
    counts = {(v,): cnt for v, cnt in enumerate(vec) if cnt}
    return JointDistribution(p, 1, counts, len(S) ** len(phi))


def components(system: ConditionSystem) -> list:
    """Connected components of the condition/coordinate incidence graph, as
    sorted lists of condition indices (ordered by smallest member)."""
    k = len(system)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for i, f in enumerate(system.forms):
        for z in f.support():
            if z in owner:
                a, b = find(owner[z]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[z] = i
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _frontier_plan(forms: Sequence[LinearForm]):
    coords = sorted(set().union(*(f.support() for f in forms)))
    first, last = {}, {}
    for i, f in enumerate(forms):
        zs = sorted(f.support())
        first.setdefault(zs[0], []).append(i)
        last.setdefault(zs[-1], []).append(i)
    return coords, first, last


def _component_cost(forms, p, s_size) -> int:
    coords, first, last = _frontier_plan(forms)
    m = 0
    cost = 0
    for z in coords:
        m += len(first.get(z, ()))
        cost += p ** m * s_size
        m -= len(last.get(z, ()))
    return cost


def _component_count(conds: Sequence[Condition], S: Alphabet, budget: int) -> tuple:
    """(number of satisfying points, |S|^N) for one connected component.

    Dynamic programme over coordinates in increasing order whose state only
    tracks the values of conditions whose support has started but not ended;
    a condition is filtered by its target set after its last coordinate.
    """
    forms = [c.form for c in conds]
    p = S.p
    cost = _component_cost(forms, p, len(S))
    if cost > budget:
        raise ExactEngineTooLarge(f"component needs {cost} state updates, budget {budget}")
    coords, first, last = _frontier_plan(forms)
    total = len(S) ** len(coords)
    kern, dtype = _kernels_for(total)
    alphabet = _alphabet_array(S)
    coeff = [f.coeffs for f in forms]
    open_ = []
    cube = np.ones((), dtype=dtype)
    for z in coords:
        for i in first.get(z, ()):
            grown = np.zeros(cube.shape + (p,), dtype=dtype)
            grown[..., 0] = cube
            cube = grown
            open_.append(i)
        m = len(open_)
        col = np.array([coeff[i].get(z, 0) for i in open_], dtype=np.int64)
        flat = kern.convolve_step(cube.reshape(-1), p, m, col, alphabet)
        cube = flat.reshape((p,) * m) if m else flat.reshape(())
        for i in last.get(z, ()):
            axis = open_.index(i)
            keep = sorted(conds[i].target.elements)
            if keep:
                # object sums down to 0-d collapse to a bare int
                cube = np.asarray(cube.take(keep, axis=axis).sum(axis=axis, dtype=dtype), dtype=dtype)
            else:
                cube = np.zeros(cube.shape[:axis] + cube.shape[axis + 1:], dtype=dtype)
            open_.pop(axis)
    return int(cube.reshape(-1)[0]), total


def satisfying_density(system: ConditionSystem, budget: int | None = None) -> Fraction:
    """Exact density of {x : phi_i(x) in E_i for all i}, factored over the
    connected components of the system."""
    budget = default_budget() if budget is None else budget
    result = Fraction(1)
    for comp in components(system):
        conds = [system.conditions[i] for i in comp]
        if conds[0].form.is_zero():
            # a zero form is alone in its component
            if 0 not in conds[0].target:
                return Fraction(0)
            continue
        hits, total = _component_count(conds, system.S, budget)
        if hits == 0:
            return Fraction(0)
        result *= Fraction(hits, total)
    return result


def satisfying_density_monolithic(system: ConditionSystem, budget: int | None = None) -> Fraction:
    """Same quantity from the full joint distribution, without factoring."""
    dist = joint_distribution(system, budget)
    targets = [c.target.elements for c in system.conditions]
    hits = sum(c for y, c in dist.counts.items() if all(v in E for v, E in zip(y, targets)))
    return Fraction(hits, dist.total)


def conditional_density(system: ConditionSystem, extra: Condition, budget: int | None = None) -> Fraction:
    if not extra.target.elements:
        raise InvalidInput("extra condition has an empty target set")
    den = satisfying_density(system, budget)
    if den == 0:
        raise ConditioningOnNull("conditioning on a system with density 0")
    return satisfying_density(system.with_condition(extra), budget) / den


def _mc_shard(args):
    coef, masks, alphabet, p, n, seed = args
    return _backend.kernels.mc_count(coef, masks, alphabet, p, n, seed)


def mc_density(system: ConditionSystem, samples: int, seed: int, workers: int = 1) -> DensityEstimate:
    """Seeded Monte Carlo estimate.

    Samples are cut into shards of MC_SHARD points; shard i uses the
    substream rng.shard_seed(seed, i), so the result does not depend on
    ``workers``.
    """
    if samples < 1:
        raise InvalidInput("samples must be >= 1")
    seed &= (1 << 64) - 1
    coords, coef = dense(system.forms)
    masks = np.array([c.target.mask for c in system.conditions], dtype=np.int64)
    alphabet = _alphabet_array(system.S)
    jobs = []
    done = 0
    shard = 0
    while done < samples:
        n = min(MC_SHARD, samples - done)
        jobs.append((coef, masks, alphabet, system.p, n, shard_seed(seed, shard)))
        done += n
        shard += 1
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            hits = sum(ex.map(_mc_shard, jobs))
    else:
        hits = sum(map(_mc_shard, jobs))
    return DensityEstimate(hits / samples, samples, seed, hoeffding_halfwidth(samples), hits)

