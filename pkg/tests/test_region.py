"""
Tests for the frontier optimizer, the time-sharing hull and the preset oracle.
"""
import pytest

from qhelper.cli import build_parser
from qhelper.commands.frontier_command import FrontierCommand
from qhelper.core.channels import ChannelParams
from qhelper.core.errors import ConfigurationError
from qhelper.core.qcore import bell_state, isotropic_state
from qhelper.core.rates import RatePoint
from qhelper.core.region import (
    EPS_OPT, FrontierConfig, dominance_violations, lower_convex_hull, minimize,
    preset_channels, preset_sweep, scalarized_objective, trace_frontier,
)
from qhelper.utils.config_manager import ConfigManager
from qhelper.utils.input_validation import InputValidator

QUICK = dict(dim_c=2, dim_e=2, restarts=1, max_iters=30)


class TestFrontierConfig:
    def test_defaults(self):
        cfg = FrontierConfig()
        assert cfg.lambda_grid[0] == 0.0
        assert cfg.env_dim(2) == 4

    def test_explicit_env_dim(self):
        assert FrontierConfig(dim_e=3).env_dim(2) == 3

    @pytest.mark.parametrize("kwargs", [
        {"lambda_grid": (1.0, 0.5)},
        {"lambda_grid": (-1.0,)},
        {"lambda_grid": ()},
        {"restarts": 0},
        {"dim_c": 0},
        {"step_tol": 0.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            FrontierConfig(**kwargs)

    def test_environment_too_small(self):
        rho = isotropic_state(0.5)
        with pytest.raises(ConfigurationError):
            minimize(rho, 1.0, FrontierConfig(dim_c=1, dim_e=1))


class TestLowerConvexHull:
    def test_drops_points_above_the_chord(self):
        a, mid, b = RatePoint(1.0, 0.0), RatePoint(0.5, 0.5), RatePoint(-1.0, 1.0)
        assert lower_convex_hull([mid, b, a]) == [a, b]

    def test_keeps_points_below_the_chord(self):
        a, mid, b = RatePoint(1.0, 0.0), RatePoint(-0.2, 0.5), RatePoint(-1.0, 1.0)
        assert lower_convex_hull([b, a, mid]) == [a, mid, b]

    def test_drops_dominated_tail(self):
        a, b, tail = RatePoint(1.0, 0.0), RatePoint(-1.0, 1.0), RatePoint(-0.5, 2.0)
        hull = lower_convex_hull([a, b, tail])
        assert hull == [a, b]

    def test_r1_strictly_decreasing(self):
        pts = [RatePoint(1.0, 0.0), RatePoint(1.0, 0.3), RatePoint(0.2, 0.6), RatePoint(0.2, 0.9)]
        hull = lower_convex_hull(pts)
        assert all(p.r1 > q.r1 for p, q in zip(hull, hull[1:]))
        assert all(p.r2 < q.r2 for p, q in zip(hull, hull[1:]))


class TestOracle:
    def test_preset_channels_fit_dim_c(self):
        assert set(preset_channels(2, 1)) == {"discard"}
        names = set(preset_channels(2, 2))
        assert {"discard", "identity", "dephasing:0.5", "depolarizing:1"} <= names

    def test_preset_sweep_bell(self):
        points = preset_sweep(bell_state(), 2)
        assert points["identity"].as_tuple() == pytest.approx((-1.0, 1.0), abs=1e-9)
        assert points["discard"].as_tuple() == pytest.approx((1.0, 0.0), abs=1e-9)

    def test_dominance_violation_detected(self):
        rho = bell_state()
        result = trace_frontier(rho, FrontierConfig(lambda_grid=(4.0,), **QUICK))
        fake = {"better": RatePoint(-10.0, 0.0)}
        violations = dominance_violations(result, fake, EPS_OPT)
        assert len(violations) == 1
        assert violations[0]["preset"] == "better"
        assert violations[0]["gap"] > 1.0


class TestOptimizer:
    def test_objective_matches_rate_pipeline(self):
        rho = isotropic_state(0.75)
        outcome = minimize(rho, 0.5, FrontierConfig(lambda_grid=(0.5,), **QUICK))
        assert isinstance(outcome.point.params, ChannelParams)
        recomputed = scalarized_objective(rho, outcome.point.params, 0.5)
        assert recomputed == pytest.approx(outcome.objective, abs=2e-8)

    def test_deterministic(self):
        rho = isotropic_state(0.75)
        cfg = FrontierConfig(lambda_grid=(0.5, 2.0), **QUICK)
        first = trace_frontier(rho, cfg).to_dict()
        second = trace_frontier(rho, cfg).to_dict()
        assert first == second

    def test_parallel_matches_serial(self):
        rho = isotropic_state(0.75)
        serial = trace_frontier(rho, FrontierConfig(lambda_grid=(0.0, 0.5, 2.0), **QUICK))
        parallel = trace_frontier(rho, FrontierConfig(lambda_grid=(0.0, 0.5, 2.0), workers=3, **QUICK))
        assert serial.to_dict() == parallel.to_dict()

    def test_iteration_cap_reported(self):
        cfg = FrontierConfig(lambda_grid=(1.0,), dim_c=2, dim_e=2, restarts=1, max_iters=1)
        result = trace_frontier(isotropic_state(0.75), cfg)
        assert not result.all_converged
        assert result.outcomes[0].iterations == 1

    def test_frame_and_hull_lines(self):
        result = trace_frontier(isotropic_state(0.75), FrontierConfig(lambda_grid=(0.0, 2.0), **QUICK))
        frame = result.to_frame()
        assert list(frame.columns) == ["lambda", "r1", "r2", "converged", "iters"]
        assert len(frame) == 2
        lines = result.hull_lines()
        assert lines[0] == "# r2 r1"
        assert len(lines) == len(result.hull) + 1


def shipped_config(*argv: str) -> FrontierConfig:
    """FrontierConfig exactly as `qhelper frontier ARGV` builds it from defaults.json."""
    args = build_parser().parse_args(["frontier", *argv])
    return FrontierCommand(ConfigManager()).build_config(args)


@pytest.mark.slow
class TestFrontierAccuracy:
    def test_shipped_config(self):
        cfg = shipped_config("--state", "bell", "--dim-e", "2")
        assert cfg.lambda_grid == (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 64.0)
        assert (cfg.restarts, cfg.max_iters, cfg.seed) == (8, 400, 0)

    def test_bell_endpoints(self):
        result = trace_frontier(bell_state(), shipped_config("--state", "bell", "--dim-c", "2", "--dim-e", "2"))
        hull = result.hull
        assert hull[0].as_tuple() == pytest.approx((1.0, 0.0), abs=EPS_OPT)
        assert hull[-1].as_tuple() == pytest.approx((-1.0, 1.0), abs=EPS_OPT)
        assert all(p.r1 >= q.r1 for p, q in zip(hull, hull[1:]))

    def test_isotropic_dominates_presets(self):
        rho = isotropic_state(0.75)
        result = trace_frontier(rho, shipped_config("--state", "isotropic:0.75"))
        assert dominance_violations(result, preset_sweep(rho, 2), EPS_OPT) == []
        hull = result.hull
        assert all(p.r1 >= q.r1 for p, q in zip(hull, hull[1:]))

    def test_product_source_hull_is_flat(self):
        rho = InputValidator.validate_source("product:1.0,1.0")
        result = trace_frontier(rho, shipped_config("--state", "product:1.0,1.0", "--dim-c", "2"))
        assert result.hull
        assert all(p.r1 == pytest.approx(1.0, abs=EPS_OPT) for p in result.hull)
        assert all(o.point.r1 == pytest.approx(1.0, abs=EPS_OPT) for o in result.outcomes)
