import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import element_strategy, group_strategy, piecewise_strategy, step_map_strategy
from levylab import (
    CarrierMismatch,
    EmptyTuple,
    GridBlowup,
    PiecewiseMap,
    StepMap,
    ZdGroup,
    as_piecewise,
    disagreement,
    grid_approximate,
    h_embed,
    hamming_distance,
    identity_map,
    in_neighborhood,
    pointwise_translate,
    step_op,
)

Z = ZdGroup(1)

A, B, C = (1,), (2,), (3,)


class TestEmbed:
    def test_single_cell(self):
        m = h_embed(Z, (A,))
        assert m.n == 1 and m.values == (A,)

    def test_identity_tuple(self):
        assert h_embed(Z, ((0,), (0,))) == identity_map(Z, 2)

    def test_two_cells(self):
        m = h_embed(Z, (A, B))
        assert m.value_at(0.0) == A
        assert m.value_at(0.49) == A
        assert m.value_at(0.5) == B
        assert m.value_at(0.99) == B

    def test_empty(self):
        with pytest.raises(EmptyTuple):
            h_embed(Z, ())

    @settings(max_examples=120, deadline=None)
    @given(st.data())
    def test_homomorphism(self, data):
        group = data.draw(group_strategy())
        n = data.draw(st.integers(1, 5))
        xs = tuple(data.draw(element_strategy(group)) for _ in range(n))
        ys = tuple(data.draw(element_strategy(group)) for _ in range(n))
        lhs = pointwise_translate(h_embed(group, xs), h_embed(group, ys))
        rhs = h_embed(group, tuple(group.op(a, b) for a, b in zip(xs, ys)))
        assert lhs == rhs


class TestStepOp:
    def test_inverse_gives_identity(self):
        f = h_embed(Z, (A, B, C))
        assert step_op(f, f, "invert-second") == identity_map(Z, 3)

    def test_lcm_grid(self):
        f = h_embed(Z, (A, B))
        g = h_embed(Z, (A, B, C))
        assert step_op(f, g).n == 6

    def test_identity_neutral(self):
        f = h_embed(Z, (A, B))
        assert step_op(identity_map(Z), f) == f

    def test_grid_blowup(self):
        f = StepMap(Z, (A,) * 1021)
        g = StepMap(Z, (B,) * 1031)
        with pytest.raises(GridBlowup):
            step_op(f, g)

    def test_carrier_mismatch(self):
        with pytest.raises(CarrierMismatch):
            step_op(h_embed(Z, (A,)), h_embed(ZdGroup(2), ((1, 1),)))


class TestDisagreement:
    def test_self(self):
        f = h_embed(Z, (A, B))
        assert disagreement(f, f) == 0.0

    def test_one_cell_of_two(self):
        assert disagreement(h_embed(Z, (A, B)), h_embed(Z, (A, C))) == 0.5

    def test_refinement(self):
        assert disagreement(h_embed(Z, (A,)), h_embed(Z, (A, B))) == 0.5

    def test_piecewise_vs_step(self):
        pm = PiecewiseMap(Z, (0.25,), (A, B))
        assert disagreement(pm, h_embed(Z, (A, B))) == 0.25

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_equals_hamming_on_common_grid(self, data):
        group = data.draw(group_strategy())
        n = data.draw(st.integers(1, 6))
        xs = tuple(data.draw(element_strategy(group)) for _ in range(n))
        ys = tuple(data.draw(element_strategy(group)) for _ in range(n))
        assert disagreement(h_embed(group, xs), h_embed(group, ys)) == hamming_distance(xs, ys)

    @settings(max_examples=80, deadline=None)
    @given(st.data())
    def test_pseudometric_triangle(self, data):
        group = data.draw(group_strategy())
        maps = [
            data.draw(st.one_of(step_map_strategy(group=group), piecewise_strategy(group=group)))
            for _ in range(3)
        ]
        f, g, h = maps
        assert disagreement(f, g) == pytest.approx(disagreement(g, f), abs=1e-12)
        assert disagreement(f, h) <= disagreement(f, g) + disagreement(g, h) + 1e-12


class TestNeighborhood:
    def test_identity_always_inside(self):
        assert in_neighborhood(identity_map(Z, 3), 1, 0.01)

    def test_strictness(self):
        m = h_embed(Z, ((0,), (5,)))
        assert in_neighborhood(m, 1, 0.6)
        assert not in_neighborhood(m, 1, 0.5)

    def test_radius_controls_membership(self):
        m = h_embed(Z, ((0,), (5,)))
        assert in_neighborhood(m, 6, 0.01)


class TestGridApproximate:
    def test_breakpoint_between_grid_points(self):
        f = PiecewiseMap(Z, (0.35,), (A, B))
        g, dis = grid_approximate(f, 4)
        assert g == (A, A, B, B)
        assert dis == pytest.approx(0.15, abs=1e-12)

    def test_breakpoint_on_grid(self):
        f = PiecewiseMap(Z, (0.35,), (A, B))
        g, dis = grid_approximate(f, 20)
        assert dis == 0.0

    def test_already_on_grid(self):
        f = h_embed(Z, (A, B, C))
        g, dis = grid_approximate(f, 3)
        assert g == (A, B, C) and dis == 0.0

    @settings(max_examples=120, deadline=None)
    @given(piecewise_strategy(), st.integers(1, 64))
    def test_disagreement_bound(self, f, n):
        g, dis = grid_approximate(f, n)
        assert set(g) <= set(f.values)
        assert dis <= len(f.breakpoints) / n + 1e-12


class TestPiecewiseValidation:
    def test_breaks_inside_unit_interval(self):
        with pytest.raises(ValueError):
            PiecewiseMap(Z, (1.2,), (A, B))

    def test_strictly_increasing(self):
        with pytest.raises(ValueError):
            PiecewiseMap(Z, (0.5, 0.5), (A, B, C))

    def test_value_count(self):
        with pytest.raises(ValueError):
            PiecewiseMap(Z, (0.5,), (A, B, C))

    def test_as_piecewise_roundtrip(self):
        f = h_embed(Z, (A, B))
        pm = as_piecewise(f)
        assert pm.breakpoints == (0.5,) and pm.values == (A, B)
