import math

import numpy as np
import pytest

from weavecraft import (
    Boundary,
    DomainError,
    EvolutionConfig,
    InitSpec,
    PatternGrid,
    RuleMetrics,
    WeavabilityConfig,
    binary_entropy,
    block_entropy,
    complement_rule,
    figure2_data,
    rule_from_wolfram_number,
    state_ratio,
    sweep_elementary,
    symbol_entropy,
    weaveability,
)


def grid_of(cells, k=2, init_rows=0):
    return PatternGrid(np.asarray(cells, dtype=np.uint8), k, {"init_rows": init_rows})


class TestSymbolEntropy:
    def test_all_zero(self):
        _, H = symbol_entropy(grid_of(np.zeros((4, 4))), scope="all")
        assert H == 0.0

    def test_half_and_half(self):
        cells = np.array([[0, 1], [1, 0]])
        freqs, H = symbol_entropy(grid_of(cells), scope="all")
        assert H == 1.0
        assert freqs.tolist() == [0.5, 0.5]

    def test_quarter_density(self):
        # p_A = 0.25: direct evaluation gives 0.8112781244591328
        cells = np.array([[1, 0, 0, 0]])
        _, H = symbol_entropy(grid_of(cells), scope="all")
        assert H == pytest.approx(0.8112781244591328, abs=1e-15)

    def test_generated_scope_excludes_init(self):
        cells = np.array([[1, 1, 1], [0, 0, 0]])
        _, H = symbol_entropy(grid_of(cells, init_rows=1), scope="generated")
        assert H == 0.0

    def test_empty_scope_errors(self):
        with pytest.raises(DomainError):
            symbol_entropy(grid_of(np.zeros((1, 3)), init_rows=1), scope="generated")

    def test_frequencies_sum_to_one(self):
        rng = np.random.default_rng(0)
        freqs, _ = symbol_entropy(grid_of(rng.integers(0, 3, (10, 10)), k=3), scope="all")
        assert abs(freqs.sum() - 1.0) <= 1e-12


class TestStateRatio:
    def test_equal_counts(self):
        assert state_ratio(grid_of([[0, 1], [1, 0]]), scope="all") == 1.0

    def test_three_to_one(self):
        assert state_ratio(grid_of([[1, 1, 1, 0]]), scope="all") == 3.0

    def test_all_ones_is_inf(self):
        assert math.isinf(state_ratio(grid_of(np.ones((3, 3))), scope="all"))

    def test_k3_unsupported(self):
        with pytest.raises(DomainError):
            state_ratio(grid_of(np.zeros((2, 2)), k=3), scope="all")


class TestBlockEntropy:
    def test_all_zero(self):
        assert block_entropy(grid_of(np.zeros((4, 6))), 3, scope="all") == 0.0

    def test_checkerboard_L2(self):
        cells = np.indices((4, 6)).sum(axis=0) % 2
        assert block_entropy(grid_of(cells), 2, scope="all") == pytest.approx(1.0, abs=1e-12)

    def test_iid_random_approaches_2_bits(self):
        rng = np.random.default_rng(7)
        cells = rng.integers(0, 2, (200, 512))
        assert block_entropy(grid_of(cells), 2, scope="all") == pytest.approx(2.0, abs=0.05)

    def test_L1_reduces_to_symbol_entropy(self):
        rng = np.random.default_rng(1)
        g = grid_of(rng.integers(0, 2, (20, 33)))
        _, H = symbol_entropy(g, scope="all")
        assert block_entropy(g, 1, scope="all") == pytest.approx(H, abs=1e-12)

    def test_block_longer_than_width(self):
        with pytest.raises(DomainError):
            block_entropy(grid_of(np.zeros((2, 3))), 4, scope="all")


def make_metrics(h, warp, weft):
    return RuleMetrics("x", (0.5, 0.5), 1.0, h, 1.0, 2, warp, weft, True, ())


class TestWeaveabilityGate:
    def test_checkerboard_passes(self):
        ok, reasons = weaveability(make_metrics(1.0, 1, 1), WeavabilityConfig())
        assert ok and reasons == ()

    def test_all_warp_fails_everything(self):
        ok, reasons = weaveability(make_metrics(math.inf, 20, 20), WeavabilityConfig())
        assert not ok
        assert set(reasons) == {"ratio", "warp-float", "weft-float"}

    def test_ratio_only_violation(self):
        cfg = WeavabilityConfig(h_min=0.5, h_max=2.0, max_float=5)
        ok, reasons = weaveability(make_metrics(3.0, 4, 4), cfg)
        assert not ok and reasons == ("ratio",)

    def test_band_validation(self):
        with pytest.raises(DomainError):
            WeavabilityConfig(h_min=2.0, h_max=0.5)

    def test_symmetric_constructor(self):
        cfg = WeavabilityConfig.symmetric(h_max=8.0)
        assert cfg.h_min == pytest.approx(1 / 8.0)


def default_sweep(seed=1, width=101, steps=50):
    return sweep_elementary(
        EvolutionConfig(width, steps, Boundary.wrap(), InitSpec.random(seed))
    )


class TestSweep:
    def test_rule0_null(self):
        sw = default_sweep()
        assert sw[0].H == 0.0 and sw[0].h == 0.0

    def test_rule51_balances_exactly(self):
        sw = default_sweep(steps=50)  # even step count
        assert sw[51].h == 1.0 and sw[51].H == 1.0

    def test_rule204_repeats_init_density(self):
        config = EvolutionConfig(101, 50, Boundary.wrap(), InitSpec.random(1))
        sw = sweep_elementary(config)
        init = np.random.default_rng(1).random((1, 101)) < 0.5
        ones = int(init.sum())
        assert sw[204].p[1] == pytest.approx(ones / 101, abs=1e-12)

    def test_deterministic(self):
        a = default_sweep(seed=9)
        b = default_sweep(seed=9)
        assert a == b

    def test_matches_per_rule_evolve(self):
        from weavecraft import evolve
        from weavecraft.metrics import compute_metrics

        config = EvolutionConfig(37, 20, Boundary.wrap(), InitSpec.random(5))
        sw = sweep_elementary(config)
        for n in (0, 30, 90, 110, 204, 255):
            grid = evolve(rule_from_wolfram_number(n), config)
            m = compute_metrics(grid, scope="generated")
            assert m.H == sw[n].H and m.h == sw[n].h
            assert (m.max_warp_float, m.max_weft_float) == (
                sw[n].max_warp_float, sw[n].max_weft_float,
            )

    def test_entropy_ratio_identity(self):
        for m in default_sweep():
            if m.h > 0 and not math.isinf(m.h):
                assert abs(m.H - binary_entropy(m.h / (1 + m.h))) <= 1e-12

    def test_complement_pairing_across_complemented_inits(self):
        # Exact form of the pairing: comp(R) evolved on the complemented init
        # has reciprocal ratio and equal entropy.
        rng = np.random.default_rng(3)
        row = np.array([0, 1] * 50)
        rng.shuffle(row)
        sw = sweep_elementary(
            EvolutionConfig(100, 50, Boundary.wrap(), InitSpec.explicit([row.tolist()]))
        )
        sw_c = sweep_elementary(
            EvolutionConfig(100, 50, Boundary.wrap(), InitSpec.explicit([(1 - row).tolist()]))
        )
        for n in range(256):
            cn = int(complement_rule(rule_from_wolfram_number(n)).id)
            h, hc = sw[n].h, sw_c[cn].h
            if h == 0.0:
                assert math.isinf(hc)
            elif math.isinf(h):
                assert hc == 0.0
            else:
                assert hc == pytest.approx(1.0 / h, abs=1e-12)
                assert sw_c[cn].H == pytest.approx(sw[n].H, abs=1e-12)


class TestFigure2:
    def test_table_shape(self):
        fig = figure2_data(default_sweep())
        assert len(fig["plottable"]) + len(fig["gutter"]) == 256
        gutter_rules = {r["rule"] for r in fig["gutter"]}
        assert {0, 255} <= gutter_rules

    def test_sorted_by_h(self):
        fig = figure2_data(default_sweep())
        hs = [r["h"] for r in fig["plottable"]]
        assert hs == sorted(hs)

    def test_max_entropy_near_balanced(self):
        fig = figure2_data(default_sweep())
        best = max(fig["plottable"], key=lambda r: r["H"])
        assert 0.8 <= best["h"] <= 1.25
