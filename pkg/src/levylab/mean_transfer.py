"""Averaging group functions along step maps.

The transfer operator sends a bounded function f on G to the function
h -> integral of f(h(t)) dt on step maps.  For step data the integral is
the cell-length-weighted sum, which makes the algebra exact: unitality,
linearity, monotonicity, and the equivariance identity
transfer(f o lambda_g) = transfer(f) o lambda_{const g} all hold to float
roundoff.  Composing with the expectation of a measure on step maps turns
almost-invariance at the step-map level into almost-invariance on G.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import CarrierMismatch
from .stepmaps import AnyMap, StepMap, h_embed, iter_cells, pointwise_translate
from .wordgroups import WordGroup

from .amplify import L0Measure


def phi_eval(f: Callable, h: AnyMap) -> float:
    """Cell-length-weighted average of f over the values of h."""
    return float(sum((stop - start) * f(v) for start, stop, v in iter_cells(h)))


def phi_member(f: Callable) -> Callable:
    """f averaged along maps, as a member over the step-map carrier."""

    def member(h: AnyMap) -> float:
        return phi_eval(f, h)

    return member


def phi_equivariance_check(group: WordGroup, f: Callable, g, h: AnyMap) -> float:
    """Residual of transfer(f o lambda_g)(h) = transfer(f)(const_g * h).

    Both sides reduce to the same finite cell sum, so the residual is zero
    up to float roundoff (contract: <= 1e-12).
    """
    g = group.validate(g)
    left = phi_eval(lambda x: f(group.op(g, x)), h)
    right = phi_eval(f, pointwise_translate(h_embed(group, (g,)), h))
    return abs(left - right)


@dataclass(frozen=True)
class MeanApprox:
    """A measure on step maps acting as a positive unital functional.

    Expectation against it is linear, maps the constant-1 member to 1, and
    is positive on non-negative members; it is the finite-stage stand-in
    for an invariant mean.
    """

    measure: L0Measure

    def expect(self, member: Callable) -> float:
        total = 0.0
        for h, w in zip(self.measure.support, self.measure.weights):
            total += w * member(h)
        return float(total)


def transfer_defect(mean: MeanApprox, f: Callable, g) -> float:
    """|E(transfer f) - E(transfer(f o lambda_g))| under the mean.

    Equals the step-map-level defect of the measure against the constant
    map at g, evaluated on the single member transfer(f).
    """
    group = mean.measure.base.group
    g = group.validate(g)
    if not isinstance(mean.measure.support[0], StepMap):
        raise CarrierMismatch("mean must be supported on step maps")
    direct = mean.expect(phi_member(f))
    shifted = mean.expect(phi_member(lambda x: f(group.op(g, x))))
    return abs(direct - shifted)
