import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weavecraft import (
    CapacityError,
    PatternGrid,
    ValidationError,
    color_separate,
    drawdown_from_grid,
    factorize,
    float_report,
    render,
)
from weavecraft.draft import grid_float_maxima, max_run, run_length_histogram


def grid_of(cells, k=2):
    return PatternGrid(np.asarray(cells, dtype=np.uint8), k)


def checkerboard(rows, cols):
    return np.indices((rows, cols)).sum(axis=0) % 2


def naive_runs(line, state):
    """Reference run-length scanner."""
    runs, n = [], 0
    for cell in line:
        if cell == state:
            n += 1
        else:
            if n:
                runs.append(n)
            n = 0
    if n:
        runs.append(n)
    return runs


def naive_float_maxima(cells):
    warp = max(
        (r for c in range(cells.shape[1]) for r in naive_runs(cells[:, c], 1)), default=0
    )
    weft = max(
        (r for r_ in range(cells.shape[0]) for r in naive_runs(cells[r_, :], 0)), default=0
    )
    return warp, weft


class TestDrawdown:
    def test_plain_weave(self):
        dd = drawdown_from_grid(grid_of(checkerboard(4, 4)), (0,), (1,))
        assert np.array_equal(dd.cells, checkerboard(4, 4))

    def test_identity_on_cells(self):
        rng = np.random.default_rng(1)
        cells = rng.integers(0, 2, (8, 8), dtype=np.uint8)
        assert np.array_equal(drawdown_from_grid(grid_of(cells)).cells, cells)

    def test_mismatched_colors(self):
        with pytest.raises(ValidationError):
            drawdown_from_grid(grid_of(checkerboard(4, 4)), warp_colors=(0, 1, 0))

    def test_palette_bounds(self):
        with pytest.raises(ValidationError):
            drawdown_from_grid(grid_of(checkerboard(2, 2)), warp_colors=(5,))

    def test_k3_unsupported(self):
        with pytest.raises(ValidationError):
            drawdown_from_grid(grid_of(np.zeros((2, 2)), k=3))


class TestColorSeparate:
    def test_k2_default_identity(self):
        cells = checkerboard(3, 4)
        binary, colors = color_separate(grid_of(cells))
        assert np.array_equal(binary.cells, cells)
        assert len(set(colors)) == 1

    def test_all_state2(self):
        binary, colors = color_separate(grid_of(np.full((3, 3), 2), k=3))
        assert binary.cells.all()
        assert colors == (2, 2, 2)

    def test_cyclic_stripes(self):
        cells = np.array([[0, 0, 0], [1, 1, 1], [2, 2, 2]])
        binary, colors = color_separate(grid_of(cells, k=3))
        assert binary.cells.tolist() == [[0, 0, 0], [1, 1, 1], [1, 1, 1]]
        assert colors == (0, 1, 2)

    def test_missing_mapping_state(self):
        with pytest.raises(ValidationError, match="missing states"):
            color_separate(grid_of(np.full((2, 2), 2), k=3), mapping={0: (0, 0), 1: (1, 1)})


class TestFloatReport:
    def test_checkerboard(self):
        rep = float_report(drawdown_from_grid(grid_of(checkerboard(6, 6))))
        assert rep.max_warp_float == 1 and rep.max_weft_float == 1

    def test_all_warp_up(self):
        rep = float_report(drawdown_from_grid(grid_of(np.ones((8, 8)))))
        assert rep.max_warp_float == 8
        assert rep.max_weft_float == 0  # absent state reported as 0
        assert rep.weft_histogram == {}

    def test_single_row_example(self):
        rep = float_report(drawdown_from_grid(grid_of([[0, 0, 1, 1, 1, 1, 0, 1]])))
        assert rep.max_weft_float == 2
        assert rep.weft_histogram == {2: 1, 1: 1}
        assert rep.max_warp_float == 1  # vertical runs in a single row are length 1
        assert rep.warp_histogram == {1: 5}

    def test_histogram_counts_maximal_runs(self):
        cells = np.array([[1, 1, 0, 1], [1, 0, 0, 1]])
        rep = float_report(drawdown_from_grid(grid_of(cells)))
        assert sum(rep.warp_histogram.values()) == len(
            [r for c in range(4) for r in naive_runs(cells[:, c], 1)]
        )

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**64 - 1))
    def test_matches_naive_scanner(self, seed):
        rng = np.random.default_rng(seed)
        cells = rng.integers(0, 2, (rng.integers(1, 12), rng.integers(1, 12)), dtype=np.uint8)
        assert grid_float_maxima(cells) == naive_float_maxima(cells)

    def test_no_wraparound_joining(self):
        # run touches both edges of a row; wrap would merge 2+2 into 4
        cells = np.array([[0, 0, 1, 0, 0]])
        assert max_run(cells == 0, axis=1) == 2

    def test_run_length_histogram_axis0(self):
        cells = np.array([[1], [1], [0], [1]])
        assert run_length_histogram(cells == 1, axis=0) == {2: 1, 1: 1}


class TestFactorize:
    def test_plain_weave_two_shafts(self):
        loom = factorize(drawdown_from_grid(grid_of(checkerboard(4, 4))))
        assert loom.shaft_count == 2
        assert loom.threading == (0, 1, 0, 1)
        assert loom.liftplan[0] != loom.liftplan[1]
        assert loom.liftplan[0] == loom.liftplan[2]

    def test_twill_four_shafts_straight_threading(self):
        base = np.array([1, 1, 0, 0])
        cells = np.array([np.roll(base, p) for p in range(4)])
        loom = factorize(drawdown_from_grid(grid_of(cells)))
        assert loom.shaft_count == 4
        assert loom.threading == (0, 1, 2, 3)

    def test_uniform_columns_one_shaft(self):
        loom = factorize(drawdown_from_grid(grid_of(np.ones((4, 6)))))
        assert loom.shaft_count == 1

    def test_capacity_error_carries_required_count(self):
        cells = np.triu(np.ones((40, 40), dtype=np.uint8))
        with pytest.raises(CapacityError) as exc:
            factorize(drawdown_from_grid(grid_of(cells)), capacity=32)
        assert exc.value.required == 40

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**64 - 1))
    def test_roundtrip_and_minimality(self, seed):
        rng = np.random.default_rng(seed)
        cells = rng.integers(0, 2, (16, 16), dtype=np.uint8)
        loom = factorize(drawdown_from_grid(grid_of(cells)))
        assert np.array_equal(loom.reconstruct(), cells)
        assert loom.shaft_count == len({cells[:, c].tobytes() for c in range(16)})


class TestRender:
    def test_single_cell(self):
        dd = drawdown_from_grid(grid_of([[1]]), palette=((10, 20, 30), (200, 100, 0)))
        img = render(dd, cell_px=2)
        assert img.shape == (2, 2, 3)
        assert (img == (200, 100, 0)).all()

    def test_checkerboard_two_colors(self):
        dd = drawdown_from_grid(grid_of(checkerboard(2, 2)))
        img = render(dd, cell_px=1)
        assert not np.array_equal(img[0, 0], img[0, 1])
        assert np.array_equal(img[0, 0], img[1, 1])

    def test_render_deterministic(self):
        from weavecraft import EvolutionConfig, InitSpec, evolve, rule_from_wolfram_number

        grid = evolve(
            rule_from_wolfram_number(110),
            EvolutionConfig(31, 31, init=InitSpec.single_center()),
        )
        dd = drawdown_from_grid(grid)
        assert np.array_equal(render(dd, 3), render(dd, 3))
