"""Step and piecewise-constant maps from [0, 1) into a word group.

A StepMap is constant on the n uniform cells [(i-1)/n, i/n); a
PiecewiseMap allows arbitrary breakpoints.  Cells are half open on the
right, and a breakpoint sitting exactly on a grid point belongs to the
cell on its right.  For discrete base groups, convergence in measure is
exactly the disagreement pseudometric computed here.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from math import lcm

from .errors import CarrierMismatch, EmptyTuple, GridBlowup
from .wordgroups import WordGroup

GRID_CAP = 10**6


@dataclass(frozen=True)
class StepMap:
    """A map constant on the n uniform cells of [0, 1)."""

    group: WordGroup
    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise EmptyTuple("a step map needs at least one cell")
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def breakpoints(self) -> tuple:
        n = self.n
        return tuple(i / n for i in range(1, n))

    def value_at(self, t: float):
        return self.values[bisect_right(self.breakpoints, t)]


@dataclass(frozen=True)
class PiecewiseMap:
    """A map constant between strictly increasing breakpoints in (0, 1).

    Adjacent cells may carry equal values; no canonicalization happens.
    """

    group: WordGroup
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        breaks = tuple(float(b) for b in self.breakpoints)
        values = tuple(self.values)
        if len(values) == 0:
            raise EmptyTuple("a piecewise map needs at least one cell")
        if len(values) != len(breaks) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        if any(not 0.0 < b < 1.0 for b in breaks):
            raise ValueError("breakpoints must lie strictly inside (0, 1)")
        if any(b1 >= b2 for b1, b2 in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", breaks)
        object.__setattr__(self, "values", values)

    def value_at(self, t: float):
        return self.values[bisect_right(self.breakpoints, t)]


AnyMap = StepMap | PiecewiseMap


def h_embed(group: WordGroup, values) -> StepMap:
    """Embed a tuple g in G^n as the step map with cell values g_i.

    This is a group homomorphism for the pointwise operation: the embedded
    product of two tuples is the pointwise product of their embeddings.
    """
    values = tuple(values)
    if not values:
        raise EmptyTuple("cannot embed an empty tuple")
    return StepMap(group, tuple(group.validate(v) for v in values))


def identity_map(group: WordGroup, n: int = 1) -> StepMap:
    return StepMap(group, (group.identity,) * n)


def as_piecewise(m: AnyMap) -> PiecewiseMap:
    if isinstance(m, PiecewiseMap):
        return m
    return PiecewiseMap(m.group, m.breakpoints, m.values)


def iter_cells(m: AnyMap):
    """Yield (start, stop, value) cells of a map, covering [0, 1)."""
    breaks = m.breakpoints
    edges = (0.0,) + tuple(breaks) + (1.0,)
    for i, v in enumerate(m.values):
        yield edges[i], edges[i + 1], v


def iter_joint_cells(a: AnyMap, b: AnyMap):
    """Yield (start, stop, va, vb) over the merged cell structure of a, b."""
    ab, bb = a.breakpoints, b.breakpoints
    va, vb = a.values, b.values
    ia = ib = 0
    start = 0.0
    while start < 1.0:
        next_a = ab[ia] if ia < len(ab) else 1.0
        next_b = bb[ib] if ib < len(bb) else 1.0
        stop = next_a if next_a <= next_b else next_b
        yield start, stop, va[ia], vb[ib]
        if stop == next_a and ia < len(ab):
            ia += 1
        if stop == next_b and ib < len(bb):
            ib += 1
        start = stop


def _check_same_group(a: AnyMap, b: AnyMap) -> WordGroup:
    if a.group != b.group:
        raise CarrierMismatch("maps live over different groups")
    return a.group


def step_op(f: StepMap, g: StepMap, op: str = "multiply", *, cap: int = GRID_CAP) -> StepMap:
    """Pointwise product f(t)*g(t) (or f(t)*g(t)^-1) on the lcm grid."""
    group = _check_same_group(f, g)
    if op not in ("multiply", "invert-second"):
        raise ValueError(f"unknown op {op!r}")
    n = lcm(f.n, g.n)
    if n > cap:
        raise GridBlowup(f"common refinement grid {n} exceeds cap {cap}")
    sa, sb = n // f.n, n // g.n
    second = g.values if op == "multiply" else tuple(group.inv(v) for v in g.values)
    values = tuple(group.op(f.values[i // sa], second[i // sb]) for i in range(n))
    return StepMap(group, values)


def pointwise_translate(g: AnyMap, h: AnyMap, *, cap: int = GRID_CAP) -> AnyMap:
    """The left translate t -> g(t)*h(t); StepMap when both are step maps."""
    if isinstance(g, StepMap) and isinstance(h, StepMap):
        if g.n == h.n:
            group = _check_same_group(g, h)
            return StepMap(group, tuple(group.op(a, b) for a, b in zip(g.values, h.values)))
        return step_op(g, h, cap=cap)
    group = _check_same_group(g, h)
    breaks: list[float] = []
    values = []
    for start, _, va, vb in iter_joint_cells(g, h):
        if start > 0.0:
            breaks.append(start)
        values.append(group.op(va, vb))
    return PiecewiseMap(group, tuple(breaks), tuple(values))


def disagreement(f: AnyMap, g: AnyMap, *, cap: int = GRID_CAP) -> float:
    """Lebesgue measure of {t : f(t) != g(t)}.

    A pseudometric on maps; on equal-grid step maps it equals the
    normalized Hamming distance of the value tuples.
    """
    _check_same_group(f, g)
    if isinstance(f, StepMap) and isinstance(g, StepMap):
        if f.n == g.n:
            return sum(1 for a, b in zip(f.values, g.values) if a != b) / f.n
        n = lcm(f.n, g.n)
        if n > cap:
            raise GridBlowup(f"common refinement grid {n} exceeds cap {cap}")
        sa, sb = n // f.n, n // g.n
        return sum(1 for i in range(n) if f.values[i // sa] != g.values[i // sb]) / n
    return sum(stop - start for start, stop, va, vb in iter_joint_cells(f, g) if va != vb)


def in_neighborhood(f: AnyMap, radius: int, eps: float) -> bool:
    """Membership in the basic neighborhood N(ball(radius), eps) of the identity.

    True iff the mass of {t : wl(f(t)) >= radius} is strictly below eps,
    i.e. f stays inside the open word ball of the given radius outside a
    set of measure < eps.
    """
    wl = f.group.word_length
    offending = sum(stop - start for start, stop, v in iter_cells(f) if wl(v) >= radius)
    return offending < eps


def grid_approximate(f: AnyMap, n: int) -> tuple[tuple, float]:
    """Left-endpoint sampling of f on the uniform n-grid.

    Returns the tuple g with g_i = f((i-1)/n) together with
    disagreement(f, h_embed(g)); the latter is at most
    (#breakpoints)/n, and the tuple only uses values f already takes.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(f, StepMap) and f.n == n:
        return f.values, 0.0
    pm = as_piecewise(f)
    g = tuple(pm.value_at(i / n) for i in range(n))
    return g, disagreement(f, StepMap(f.group, g))
