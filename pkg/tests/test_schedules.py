import math

import pytest

from netzo import ConfigError, RadiusSchedule, StepSchedule, eta_at, radius_at


class TestStepSchedule:
    def test_nonconvex_value(self):
        s = StepSchedule.nonconvex(n_agents=4, dim=1, horizon=400)
        assert eta_at(s, 0) == pytest.approx(0.1, rel=1e-15)
        assert eta_at(s, 399) == eta_at(s, 0)

    def test_pl_values(self):
        s = StepSchedule.pl(kappa_eta=2.0, t1=10.0)
        assert eta_at(s, 0) == pytest.approx(0.2, rel=1e-15)
        assert eta_at(s, 10) == pytest.approx(0.1, rel=1e-15)

    def test_pl_admissibility(self):
        StepSchedule.pl(kappa_eta=17.0, t1=10.0, pl_constant=0.5)
        with pytest.raises(ConfigError, match="8/nu"):
            StepSchedule.pl(kappa_eta=16.0, t1=10.0, pl_constant=0.5)

    def test_constant(self):
        assert eta_at(StepSchedule.constant(0.03), 123) == 0.03
        with pytest.raises(ConfigError):
            StepSchedule.constant(-1.0)

    def test_nonconvex_requires_horizon(self):
        with pytest.raises(ConfigError):
            StepSchedule.nonconvex(4, 2, 0)


class TestRadiusSchedule:
    def test_nonconvex_values(self):
        r = RadiusSchedule.nonconvex(1.0)
        assert radius_at(r, 0, dim=1, n_agents=1) == 1.0
        assert radius_at(r, 15, dim=16, n_agents=16) == pytest.approx(0.125, rel=1e-15)

    def test_pl_tracks_step(self):
        step = StepSchedule.constant(0.01)
        r = RadiusSchedule.pl(step, 1.0)
        expected = math.sqrt(0.01 * 100 / 110)
        assert radius_at(r, 5, dim=100, n_agents=10) == pytest.approx(expected, rel=1e-15)

    def test_pl_decays_with_step(self):
        step = StepSchedule.pl(kappa_eta=2.0, t1=10.0)
        r = RadiusSchedule.pl(step, 0.7)
        values = [radius_at(r, k, dim=20, n_agents=5) for k in range(50)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_constant(self):
        assert radius_at(RadiusSchedule.constant(0.05), 99, 10, 3) == 0.05

    def test_validation(self):
        with pytest.raises(ConfigError):
            RadiusSchedule.nonconvex(0.0)
        with pytest.raises(ConfigError):
            RadiusSchedule.constant(0.0)
