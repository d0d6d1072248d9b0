import numpy as np
import pytest

from fracopt.model import build_matrix, fit_stacked, grid_from_lists, HyperPoint
from fracopt.model.trees import BoostParams
from fracopt.optimize import (EPSILON_INTERVAL, design_vector, feasible,
                              percent_of_bounds, recommend, retrospective)
from fracopt.welldata import (DESIGN_PARAMS, DesignParams, SyntheticSpec,
                              generate_synthetic_detailed)
from fracopt.welldata.synthetic import (DESIGN_BUMP_AMPLITUDE,
                                        DESIGN_BUMP_WIDTH,
                                        DESIGN_OPTIMUM_SCALED,
                                        design_bounds_arrays, true_response)


def scaled_to_design(u):
    lo, hi = design_bounds_arrays()
    return lo + np.asarray(u) * (hi - lo)


def truth_optimal_design(lower, upper, c_start, mass_cap=None):
    """Componentwise argmax of the separable bump response under box bounds,
    the ramp interval and an optional mass cap. Independent of any model."""
    lo_g, hi_g = design_bounds_arrays()
    opt = scaled_to_design(DESIGN_OPTIMUM_SCALED)
    x = np.clip(opt, lower, upper)
    if mass_cap is not None:
        x[3] = min(x[3], mass_cap)
    # integer stage count: best of floor/ceil by bump value
    lo_s, hi_s = np.ceil(lower[0]), np.floor(upper[0])
    cands = {np.floor(x[0]), np.ceil(x[0])}
    cands = [c for c in cands if lo_s <= c <= hi_s]
    x[0] = max(cands, key=lambda c: -((c - opt[0]) ** 2))
    # final concentration: clamp its bump center into the ramp-feasible range
    c_avg = x[3] / x[2]
    delta = c_avg - c_start
    assert delta > 0, "constructed scenario must keep the ramp defined"
    cf_lo = max(lower[5], c_start + (1 + EPSILON_INTERVAL[0]) * delta)
    cf_hi = min(upper[5], c_start + (1 + EPSILON_INTERVAL[1]) * delta)
    assert cf_lo <= cf_hi, "ramp interval must intersect the concentration box"
    x[5] = float(np.clip(opt[5], cf_lo, cf_hi))
    return x


@pytest.fixture(scope="module")
def trained_field():
    ds, truth = generate_synthetic_detailed(
        1000, 42, SyntheticSpec(noise_frac=0.02))
    X, y, schema, ids = build_matrix(ds)
    model = fit_stacked(X, y, schema,
                        grid=[HyperPoint(l2_lambda=1.0,
                                         boost=BoostParams(n_trees=500,
                                                           max_depth=3,
                                                           learning_rate=0.06))],
                        seed=7)
    return ds, truth, model


class TestRecommend:
    def test_best_method_lands_near_truth_optimum(self, trained_field):
        ds, truth, model = trained_field
        pilot = ds.rows[5]
        out = recommend(ds, model, pilot, methods=["de", "pso", "local", "sbo"],
                        seed=3, budget=200)
        best_name = max(out.results,
                        key=lambda m: out.results[m].best_value or -np.inf)
        best = out.results[best_name]
        assert best.feasible
        t_opt = truth_optimal_design(out.setup.lower, out.setup.upper,
                                     out.setup.c_start)
        rel = (best.best_design - t_opt) / (out.setup.upper - out.setup.lower)
        dist = float(np.sqrt((rel ** 2).mean()))
        assert dist <= 0.10, f"best={best_name} dist={dist}"

    def test_single_method_table(self, trained_field):
        ds, _, model = trained_field
        out = recommend(ds, model, ds.rows[11], methods=["de"], seed=1,
                        budget=60)
        assert len(out.table) == 1
        assert out.table[0]["method"] == "de"

    def test_percent_scale_endpoints(self):
        lower = np.array([0.0, 10.0])
        upper = np.array([1.0, 20.0])
        assert percent_of_bounds(np.array([0.0, 20.0]), lower, upper) == \
            [0.0, 100.0]

    def test_all_methods_feasible_and_within_budget(self, trained_field):
        ds, _, model = trained_field
        out = recommend(ds, model, ds.rows[20],
                        methods=["de", "pso", "local", "sbo"], seed=2,
                        budget=80)
        for name, res in out.results.items():
            assert res.n_evaluations <= 80, name
            assert res.feasible, name
            problem_lower, problem_upper = out.setup.lower, out.setup.upper
            assert (res.best_design >= problem_lower - 1e-9).all()
            assert (res.best_design <= problem_upper + 1e-9).all()


class TestRetrospective:
    def _poor_actual(self, setup_lower, setup_upper, c_start, gap_target=(30, 50)):
        """Construct an actual design whose truth gap (vs the capped optimum)
        sits inside ``gap_target`` percent, by scanning a shrinkage path."""
        opt_u = DESIGN_OPTIMUM_SCALED
        lo_g, hi_g = design_bounds_arrays()
        for back in np.linspace(0.15, 0.9, 40):
            u = np.clip(opt_u - back * np.array([0.3, 0.25, 0.3, 0.35, 0.3, 0.2]),
                        0.02, 0.98)
            x = scaled_to_design(u)
            x = np.clip(x, setup_lower, setup_upper)
            x[0] = round(x[0])
            c_avg = x[3] / x[2]
            if c_avg <= c_start:
                continue
            # keep the actual job ramp-feasible
            x[5] = float(np.clip(x[5], c_start + 1.5 * (c_avg - c_start),
                                 c_start + 2.5 * (c_avg - c_start)))
            yield x

    def test_known_gap_recovered(self, trained_field):
        ds, truth, model = trained_field
        pilot = ds.rows[8]
        from fracopt.optimize import prepare_pilot
        setup = prepare_pilot(ds, model, pilot, seed=5)
        chosen = None
        for x in self._poor_actual(setup.lower, setup.upper, setup.c_start):
            t_opt = truth_optimal_design(setup.lower, setup.upper,
                                         setup.c_start, mass_cap=float(x[3]))
            truth_gap = (true_response(setup.environment, t_opt)
                         / true_response(setup.environment, x) - 1) * 100
            if 30.0 <= truth_gap <= 50.0:
                chosen = (x, truth_gap)
                break
        assert chosen is not None, "no candidate produced a 30-50% truth gap"
        x, truth_gap = chosen
        actual = DesignParams(n_stages=int(x[0]), pad_share=float(x[1]),
                              fluid_volume=float(x[2]), proppant_mass=float(x[3]),
                              fluid_rate=float(x[4]), final_prop_conc=float(x[5]))
        out = retrospective(ds, model, pilot, actual, seed=5, budget=200)
        assert out.uplift_pct >= 0.0
        assert abs(out.uplift_pct - truth_gap) <= 10.0, \
            f"uplift {out.uplift_pct} vs truth {truth_gap}"

    def test_already_optimal_design_near_zero_uplift(self, trained_field):
        ds, _, model = trained_field
        pilot = ds.rows[14]
        from fracopt.optimize import prepare_pilot
        setup = prepare_pilot(ds, model, pilot, seed=6)
        x = truth_optimal_design(setup.lower, setup.upper, setup.c_start)
        actual = DesignParams(n_stages=int(x[0]), pad_share=float(x[1]),
                              fluid_volume=float(x[2]), proppant_mass=float(x[3]),
                              fluid_rate=float(x[4]), final_prop_conc=float(x[5]))
        out = retrospective(ds, model, pilot, actual, seed=6, budget=120)
        assert 0.0 <= out.uplift_pct < 2.0

    def test_uplift_never_negative(self, trained_field):
        ds, _, model = trained_field
        pilot = ds.rows[17]
        rng = np.random.default_rng(0)
        lo, hi = design_bounds_arrays()
        x = lo + rng.random(6) * (hi - lo)
        x[0] = round(x[0])
        actual = DesignParams(n_stages=int(x[0]), pad_share=float(x[1]),
                              fluid_volume=float(x[2]), proppant_mass=float(x[3]),
                              fluid_rate=float(x[4]), final_prop_conc=float(x[5]))
        out = retrospective(ds, model, pilot, actual, seed=2, budget=60)
        assert out.uplift_pct >= 0.0

    def test_incomplete_actual_rejected(self):
        with pytest.raises(Exception, match="missing"):
            design_vector(DesignParams(n_stages=4))
