import pytest
from hypothesis import given, settings, strategies as st

from covertsim import (DistanceLaw, ModelValidityError, catch_probability,
                       chunk_catch_probability, optimal_chunks,
                       overall_catch_probability, overall_from_components,
                       overall_series_truncated, postponement_probability,
                       stability_bound)


class TestPostponement:
    def test_boundaries(self, cfg):
        law = DistanceLaw(cfg.u)
        assert postponement_probability(0.0, law) == 0.0
        assert postponement_probability(law.d_max, law) == pytest.approx(1.0)

    def test_baseline_value(self, cfg):
        law = DistanceLaw(cfg.u)
        # frozen from quadrature of the density over [0, 100]
        assert postponement_probability(100.0, law) == pytest.approx(
            0.0287993, abs=1e-6)


class TestChunkCatch:
    def test_no_split_matches_full_message(self, cfg, r_bar):
        assert chunk_catch_probability(1, 10, cfg, r_bar) == (
            catch_probability(10, cfg, r_bar).p_ca)

    def test_chunk_equal_to_window(self, cfg, r_bar):
        # chunk = one detection window leaves no room for any attempt
        n = cfg.m_symbols // 10
        assert chunk_catch_probability(n, 10, cfg, r_bar) == 0.0

    def test_nonincreasing_in_chunks(self, cfg, r_bar):
        vals = [chunk_catch_probability(n, 10, cfg, r_bar)
                for n in range(1, 31)]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


class TestOverallClosedForm:
    def test_zero_catch_gives_zero(self):
        for n in (1, 5, 30):
            assert overall_from_components(0.0, 0.1, n) == 0.0

    def test_single_chunk_reduction(self, cfg, r_bar):
        plan = overall_catch_probability(1, 10, cfg, r_bar)
        assert plan.p_ov == pytest.approx(
            plan.p_ca_chunk / (1.0 - plan.p_as), abs=1e-12)

    def test_no_postponement_reduction(self):
        p_ca, n = 0.23, 7
        assert overall_from_components(p_ca, 0.0, n) == pytest.approx(
            1.0 - (1.0 - p_ca)**n, abs=1e-15)

    def test_overall_at_least_single_shot(self, cfg, r_bar):
        plan = overall_catch_probability(1, 10, cfg, r_bar)
        assert plan.p_ov >= plan.p_ca_chunk

    def test_invalid_components_raise(self):
        with pytest.raises(ModelValidityError):
            overall_from_components(0.9, 0.2, 3)

    @given(st.floats(0.0, 0.8), st.floats(0.0, 0.19), st.integers(1, 40))
    @settings(max_examples=80, deadline=None)
    def test_series_oracle(self, p_ca, p_as, n):
        closed = overall_from_components(p_ca, p_as, n)
        series = overall_series_truncated(p_ca, p_as, n, terms=200)
        assert closed == pytest.approx(series, abs=1e-10)

    def test_series_oracle_baseline(self, cfg, r_bar):
        plan = overall_catch_probability(5, 10, cfg, r_bar)
        series = overall_series_truncated(plan.p_ca_chunk, plan.p_as, 5,
                                          terms=200)
        assert plan.p_ov == pytest.approx(series, abs=1e-10)


class TestOptimalChunks:
    def test_matches_grid_argmin(self, cfg, r_bar):
        n_star, p_star = optimal_chunks(cfg, 10, r_bar, n_max=30)
        scan = [overall_catch_probability(n, 10, cfg, r_bar).p_ov
                for n in range(1, 31)]
        assert p_star == min(scan)
        assert n_star == scan.index(min(scan)) + 1

    def test_monotone_decreasing_scan_hits_boundary(self, cfg, r_bar):
        # over a short prefix where the curve still falls, argmin = n_max
        n_star, _ = optimal_chunks(cfg, 10, r_bar, n_max=2)
        assert n_star == 2

    def test_baseline_curve_swing(self, cfg, r_bar):
        scan = [overall_catch_probability(n, 10, cfg, r_bar).p_ov
                for n in range(1, 31)]
        assert max(scan) - min(scan) >= 0.10


class TestStabilityBound:
    def test_paper_literal(self):
        assert stability_bound(0.1, 10.0).paper_literal == 1

    def test_mg1_utilization(self):
        b = stability_bound(0.01, 10.0)
        assert b.mg1_utilization == 10
        assert b.paper_literal == 0

    def test_fixed_point(self):
        b = stability_bound(0.1, 10.0)
        assert b.paper_literal == b.mg1_utilization == 1

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            stability_bound(0.0, 10.0)
