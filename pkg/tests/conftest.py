"""Shared hypothesis strategies and independent brute-force oracles.

The oracles deliberately re-derive quantities with plain loops and no
library shortcuts, so tests can pin library outputs against them.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from hypothesis import strategies as st

from levylab import CyclicGroup, FiniteMMSpace, FreeGroup2, PiecewiseMap, StepMap, ZdGroup

# ---------------------------------------------------------------------------
# strategies

small_ints = st.integers(min_value=-5, max_value=5)


def group_strategy():
    return st.one_of(
        st.just(ZdGroup(1)),
        st.just(ZdGroup(2)),
        st.integers(min_value=2, max_value=12).map(CyclicGroup),
        st.just(FreeGroup2()),
    )


def element_strategy(group):
    if isinstance(group, ZdGroup):
        return st.tuples(*[small_ints] * group.d)
    if isinstance(group, CyclicGroup):
        return st.integers(min_value=0, max_value=group.m - 1)
    letters = st.sampled_from("aAbB")
    return st.lists(letters, max_size=6).map(lambda ls: group.validate("".join(ls)))


@st.composite
def group_with_elements(draw, count=3):
    group = draw(group_strategy())
    elems = [draw(element_strategy(group)) for _ in range(count)]
    return (group, *elems)


@st.composite
def step_map_strategy(draw, group=None, max_n=6):
    if group is None:
        group = draw(group_strategy())
    n = draw(st.integers(min_value=1, max_value=max_n))
    values = tuple(draw(element_strategy(group)) for _ in range(n))
    return StepMap(group, values)


@st.composite
def piecewise_strategy(draw, group=None, max_pieces=4):
    if group is None:
        group = draw(group_strategy())
    pieces = draw(st.integers(min_value=1, max_value=max_pieces))
    breaks = draw(
        st.lists(
            st.floats(min_value=0.05, max_value=0.95),
            min_size=pieces - 1,
            max_size=pieces - 1,
            unique=True,
        ).map(sorted)
    )
    values = tuple(draw(element_strategy(group)) for _ in range(pieces))
    return PiecewiseMap(group, tuple(breaks), values)


@st.composite
def mm_space_strategy(draw, max_points=6):
    """Random space from planar points so the triangle inequality is free."""
    n = draw(st.integers(min_value=1, max_value=max_points))
    coord = st.floats(min_value=-3.0, max_value=3.0)
    pts = [draw(st.tuples(coord, coord)) for _ in range(n)]
    dist = np.array(
        [[math.hypot(a[0] - b[0], a[1] - b[1]) for b in pts] for a in pts]
    )
    raw = [draw(st.floats(min_value=0.05, max_value=1.0)) for _ in range(n)]
    mu = np.asarray(raw) / sum(raw)
    return FiniteMMSpace(tuple(range(n)), dist, mu)


# ---------------------------------------------------------------------------
# oracles


def brute_alpha(space: FiniteMMSpace, eps: float) -> float:
    """Concentration function by direct subset enumeration."""
    if eps == 0:
        return 0.5
    n = len(space)
    worst = 1.0
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if sum(space.mu[i] for i in members) < 0.5 - 1e-12:
            continue
        mass = sum(
            space.mu[x]
            for x in range(n)
            if min(space.dist[x][a] for a in members) <= eps + 1e-12
        )
        worst = min(worst, mass)
    return 1.0 - worst


def brute_median(values, weights) -> float:
    """Smallest m among the attained values with both half-mass conditions."""
    best = None
    for m in sorted(values):
        above = sum(w for v, w in zip(values, weights) if v >= m)
        below = sum(w for v, w in zip(values, weights) if v <= m)
        if above >= 0.5 - 1e-12 and below >= 0.5 - 1e-12:
            best = m
            break
    assert best is not None
    return best


def manual_product_map(g, h) -> PiecewiseMap:
    """Pointwise product built from value lookups only (oracle path)."""
    group = h.group
    breaks = sorted(set(g.breakpoints) | set(h.breakpoints))
    samples = [0.0] + list(breaks)
    values = tuple(group.op(g.value_at(t), h.value_at(t)) for t in samples)
    return PiecewiseMap(group, tuple(breaks), values)


def brute_l0_defect(mu, n: int, g, members) -> float:
    """Defect of the transported product measure by raw tuple enumeration."""
    group = mu.group
    grid_breaks = tuple(i / n for i in range(1, n))
    best = 0.0
    for f in members:
        direct = 0.0
        shifted = 0.0
        for combo in itertools.product(range(len(mu.support)), repeat=n):
            w = math.prod(mu.weights[i] for i in combo)
            hmap = PiecewiseMap(group, grid_breaks, tuple(mu.support[i] for i in combo))
            direct += w * f(hmap)
            shifted += w * f(manual_product_map(g, hmap))
        best = max(best, abs(direct - shifted))
    return best


def brute_translated_expectation(mu, n: int, shift_tuple, members) -> list[float]:
    """E[f(h(shift * x))] for each member, by raw tuple enumeration."""
    group = mu.group
    out = []
    for f in members:
        total = 0.0
        for combo in itertools.product(range(len(mu.support)), repeat=n):
            w = math.prod(mu.weights[i] for i in combo)
            vals = tuple(
                group.op(s, mu.support[i]) for s, i in zip(shift_tuple, combo)
            )
            total += w * f(StepMap(group, vals))
        out.append(total)
    return out
