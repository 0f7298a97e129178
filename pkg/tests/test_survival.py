import math

import numpy as np
import pytest

from policydiff.errors import NoEvents, PanelCoverageGap, UnknownPolicy
from policydiff.ingest import CovariatePanel
from policydiff.survival import (
    PersonPeriodRow,
    PersonPeriodTable,
    _partial_likelihood_parts,
    build_person_periods,
    fit_cox,
    hazard_report,
)
from policydiff.constants import STATE_CODES

from oracles import (
    finite_difference_gradient,
    grid_refine_maximize,
    oracle_log_partial_likelihood,
    score_bisection_single_covariate,
    synth_person_periods,
)


def dense_panel(y0, y1, factors, seed=0, states=STATE_CODES):
    rng = np.random.default_rng(seed)
    n_years = y1 - y0 + 1
    values = rng.normal(0.0, 1.0, (len(states), n_years, len(factors)))
    return CovariatePanel(tuple(states), y0, y1, tuple(factors), values,
                          np.ones_like(values, dtype=bool))


class TestPersonPeriods:
    def test_adopter_rows(self, hate_crimes_table):
        panel = dense_panel(1978, 1983, ["F1", "F2"])
        periods = build_person_periods("hate_crimes", hate_crimes_table, panel)
        wa = [r for r in periods.rows if r.state == "WA"]
        assert [r.year for r in wa] == [1978, 1979, 1980, 1981]
        assert [r.event for r in wa] == [False, False, False, True]

    def test_non_adopter_censored(self, hate_crimes_table):
        panel = dense_panel(1978, 1983, ["F1"])
        periods = build_person_periods("hate_crimes", hate_crimes_table, panel)
        ind = [r for r in periods.rows if r.state == "IN"]
        assert [r.year for r in ind] == list(range(1978, 1984))
        assert not any(r.event for r in ind)

    def test_first_adopter_single_row(self, hate_crimes_table):
        panel = dense_panel(1978, 1983, ["F1"])
        periods = build_person_periods("hate_crimes", hate_crimes_table, panel)
        ca = [r for r in periods.rows if r.state == "CA"]
        assert len(ca) == 1 and ca[0].year == 1978 and ca[0].event

    def test_event_count_matches_adopters(self, hate_crimes_table):
        panel = dense_panel(1978, 1983, ["F1"])
        periods = build_person_periods("hate_crimes", hate_crimes_table, panel)
        assert sum(r.event for r in periods.rows) == 10

    def test_unknown_policy(self, hate_crimes_table):
        panel = dense_panel(1978, 1983, ["F1"])
        with pytest.raises(UnknownPolicy):
            build_person_periods("ghost", hate_crimes_table, panel)

    def test_panel_coverage_gap(self, hate_crimes_table):
        panel = dense_panel(1980, 1983, ["F1"])  # starts after first adoption year
        with pytest.raises(PanelCoverageGap):
            build_person_periods("hate_crimes", hate_crimes_table, panel)


class TestFitAgainstOracles:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(101)
        for _ in range(4):
            periods, _ = synth_person_periods(rng, d=2)
            X, years, events = periods.design()
            for _ in range(3):
                beta = rng.normal(0.0, 0.5, 2)
                _, grad, _ = _partial_likelihood_parts(X, years, events, beta, "efron")
                fd = finite_difference_gradient(
                    lambda b: _partial_likelihood_parts(X, years, events, b, "efron")[0], beta)
                rel = np.abs(fd - grad) / np.maximum(np.abs(grad), 1.0)
                assert rel.max() < 1e-6

    def test_lpl_matches_independent_evaluator(self):
        rng = np.random.default_rng(55)
        periods, _ = synth_person_periods(rng, d=3)
        X, years, events = periods.design()
        for _ in range(5):
            beta = rng.normal(0.0, 0.7, 3)
            pkg = _partial_likelihood_parts(X, years, events, beta, "efron")[0]
            ora = oracle_log_partial_likelihood(X, years, events, beta)
            assert pkg == pytest.approx(ora, rel=1e-10, abs=1e-10)

    def test_coefficients_match_grid_maximizer(self):
        rng = np.random.default_rng(7)
        periods, _ = synth_person_periods(rng, d=2, beta=[0.5, -0.3])
        X, years, events = periods.design()
        fit = fit_cox(periods)
        assert fit.converged
        oracle = grid_refine_maximize(
            lambda b: oracle_log_partial_likelihood(X, years, events, b), d=2)
        np.testing.assert_allclose(fit.coefficients, oracle, atol=1e-4)

    def test_single_binary_covariate_bisection(self):
        # distinct event years -> no ties, closed-form score equation applies
        rng = np.random.default_rng(3)
        rows = []
        n_states, horizon = 10, 30
        beta_true = 0.8
        adopt_years = {}
        x_of = {}
        for s in range(n_states):
            x = float(s % 2)
            x_of[s] = x
            for t in range(horizon):
                hazard = 0.05 * math.exp(beta_true * x)
                if rng.random() < 1.0 - math.exp(-hazard):
                    adopt_years[s] = t
                    break
        # drop ties by keeping the first adopter per year
        seen = {}
        for s, t in sorted(adopt_years.items(), key=lambda kv: (kv[1], kv[0])):
            if t not in seen.values():
                seen[s] = t
        last = max(seen.values())
        for s in range(n_states):
            end = seen.get(s, last)
            for t in range(end + 1):
                rows.append(PersonPeriodRow(f"S{s:02d}", 2000 + t,
                                            np.array([x_of[s]]), s in seen and t == seen[s]))
        periods = PersonPeriodTable("bin", ("x0",), tuple(rows))
        X, years, events = periods.design()
        assert len(np.unique(years[events])) == int(events.sum())  # no ties
        fit = fit_cox(periods)
        root = score_bisection_single_covariate(X, years, events)
        assert fit.coefficients[0] == pytest.approx(root, abs=1e-6)

    def test_scaling_invariance(self):
        rng = np.random.default_rng(21)
        periods, _ = synth_person_periods(rng, d=2)
        fit1 = fit_cox(periods)
        c = 100.0
        scaled_rows = tuple(
            PersonPeriodRow(r.state, r.year, r.covariates * np.array([c, 1.0]), r.event)
            for r in periods.rows)
        fit2 = fit_cox(PersonPeriodTable(periods.policy_id, periods.factors, scaled_rows))
        assert fit2.coefficients[0] == pytest.approx(fit1.coefficients[0] / c, rel=1e-6)
        assert fit2.coefficients[1] == pytest.approx(fit1.coefficients[1], rel=1e-6)
        assert fit2.wald_p_values[0] == pytest.approx(fit1.wald_p_values[0], rel=1e-6)
        assert fit2.wald_p_values[1] == pytest.approx(fit1.wald_p_values[1], rel=1e-6)

    def test_lpl_not_below_start(self):
        rng = np.random.default_rng(33)
        periods, _ = synth_person_periods(rng, d=3)
        X, years, events = periods.design()
        fit = fit_cox(periods)
        # fitting starts at beta=0 on the standardized scale; the accepted
        # steps never decrease the objective
        Xs = (X - X.mean(axis=0)) / X.std(axis=0)
        at_zero = _partial_likelihood_parts(Xs, years, events, np.zeros(3), "efron")[0]
        assert fit.log_partial_likelihood >= at_zero - 1e-12


class TestFitContract:
    def test_hazard_ratio_is_exp_coefficient(self):
        rng = np.random.default_rng(2)
        periods, _ = synth_person_periods(rng, d=2)
        fit = fit_cox(periods)
        np.testing.assert_array_equal(fit.hazard_ratios, np.exp(fit.coefficients))

    def test_ci_brackets_ratio(self):
        rng = np.random.default_rng(4)
        periods, _ = synth_person_periods(rng, d=2)
        fit = fit_cox(periods)
        for j in range(2):
            assert fit.ci_low[j] <= fit.hazard_ratios[j] <= fit.ci_high[j]
            assert 0.0 <= fit.wald_p_values[j] <= 1.0

    def test_constant_column_dropped(self):
        rng = np.random.default_rng(8)
        periods, _ = synth_person_periods(rng, d=2)
        rows = tuple(
            PersonPeriodRow(r.state, r.year, np.append(r.covariates, 0.0), r.event)
            for r in periods.rows)
        wide = PersonPeriodTable(periods.policy_id, ("x0", "x1", "zero"), rows)
        fit = fit_cox(wide)
        assert ("zero", "constant") in fit.dropped_factors
        assert fit.coefficients[2] == 0.0
        assert fit.hazard_ratios[2] == 1.0

    def test_collinear_column_dropped(self):
        rng = np.random.default_rng(9)
        periods, _ = synth_person_periods(rng, d=2)
        rows = tuple(
            PersonPeriodRow(r.state, r.year,
                            np.append(r.covariates, 2.0 * r.covariates[0] - 1.0), r.event)
            for r in periods.rows)
        wide = PersonPeriodTable(periods.policy_id, ("x0", "x1", "copy"), rows)
        fit = fit_cox(wide)
        assert ("copy", "collinear") in fit.dropped_factors

    def test_no_events(self):
        rows = tuple(
            PersonPeriodRow(f"S{i}", 2000, np.array([float(i)]), False) for i in range(5))
        with pytest.raises(NoEvents):
            fit_cox(PersonPeriodTable("none", ("x0",), rows))

    def test_breslow_option(self):
        rng = np.random.default_rng(12)
        periods, _ = synth_person_periods(rng, d=2)
        efron = fit_cox(periods, tie_method="efron")
        breslow = fit_cox(periods, tie_method="breslow")
        assert efron.converged and breslow.converged
        # annual ties make the corrections genuinely different
        assert not np.allclose(efron.coefficients, breslow.coefficients)


class TestHazardReport:
    def test_ordering_and_markers(self):
        rng = np.random.default_rng(14)
        periods, _ = synth_person_periods(rng, d=3, beta=[1.0, -0.5, 0.0])
        fit = fit_cox(periods)
        report = hazard_report(fit)
        ratios = [e["hazard_ratio"] for e in report if e["dropped"] is None]
        assert ratios == sorted(ratios, reverse=True)
        for e in report:
            if e["p_value"] is not None:
                assert e["significant"] == (e["p_value"] < 0.05)

    def test_dropped_listed_last(self):
        rng = np.random.default_rng(15)
        periods, _ = synth_person_periods(rng, d=2)
        rows = tuple(
            PersonPeriodRow(r.state, r.year, np.append(r.covariates, 3.14), r.event)
            for r in periods.rows)
        fit = fit_cox(PersonPeriodTable(periods.policy_id, ("x0", "x1", "pi"), rows))
        report = hazard_report(fit)
        assert report[-1]["factor"] == "pi"
        assert report[-1]["dropped"] == "constant"
        assert report[-1]["significant"] is False
