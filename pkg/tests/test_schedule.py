import numpy as np
import pytest

from epsilon_consensus.core.exceptions import ValidationError
from epsilon_consensus.core.schedule import Schedule, check_schedule, run_mode
from epsilon_consensus.core.types import CheckMode, ScheduleFamily, Verdict


class TestSchedule:
    def test_power_family(self, harmonic):
        assert harmonic(1) == pytest.approx(1.5)
        assert harmonic(2) == pytest.approx(1.0)
        assert np.allclose(harmonic.values(np.arange(1, 4)), [1.5, 1.0, 0.75])

    def test_constant_family(self):
        schedule = Schedule.constant(0.5)
        assert schedule(1) == schedule(10_000) == 0.5
        assert schedule.is_constant
        assert schedule.describe() == "0.5"

    def test_power_with_zero_exponent_counts_as_constant(self):
        assert Schedule.power(2.0, 0.0, 0.0).is_constant

    def test_family_from_string(self):
        assert Schedule('power', 3, 1, 1).family == ScheduleFamily.POWER

    def test_indexed_from_one(self, harmonic):
        with pytest.raises(ValidationError):
            harmonic(0)

    def test_negative_coefficients_rejected(self):
        with pytest.raises(ValidationError):
            Schedule.power(-1.0)
        with pytest.raises(ValidationError):
            Schedule.power(1.0, b=-2.0)

    def test_unknown_family_cannot_be_evaluated(self):
        schedule = Schedule('geometric', 1.0, 0.0, 0.5)
        assert not schedule.is_evaluable
        with pytest.raises(ValidationError):
            schedule(1)

    def test_describe(self, harmonic):
        assert harmonic.describe() == "3/(k+1)^1"


class TestCheckSchedule:
    def test_harmonic_steps_with_harmonic_eps(self, harmonic):
        assert str(check_schedule(harmonic, harmonic, CheckMode.THEOREM2)) == "theorem2: valid"
        verdict = check_schedule(harmonic, harmonic, CheckMode.THEOREM1)
        assert verdict.verdict == Verdict.INVALID
        assert str(verdict) == "theorem1: invalid (ε must be a constant ε₀)"

    def test_constant_eps(self, harmonic):
        eps = Schedule.constant(0.5)
        assert check_schedule(harmonic, eps, 'theorem1').is_valid
        assert str(check_schedule(harmonic, eps, 'theorem2')) == "theorem2: invalid (Σαε diverges)"

    def test_zero_constant_eps(self, harmonic):
        eps = Schedule.constant(0.0)
        assert str(check_schedule(harmonic, eps, 'theorem1')) == "theorem1: invalid (ε₀ must be positive)"
        assert check_schedule(harmonic, eps, 'theorem2').is_valid

    def test_square_root_steps(self, harmonic):
        alpha = Schedule.power(1.0, 0.0, 0.5)
        verdict = check_schedule(alpha, harmonic, 'theorem2')
        assert str(verdict) == "theorem2: invalid (Σα² diverges)"

    def test_steps_decaying_too_fast(self, harmonic):
        alpha = Schedule.power(1.0, 0.0, 2.0)
        assert str(check_schedule(alpha, harmonic, 'theorem2')) == "theorem2: invalid (Σα converges)"

    def test_constant_steps(self, harmonic):
        assert not check_schedule(Schedule.constant(0.1), harmonic, 'theorem2').is_valid

    @pytest.mark.parametrize("p_alpha,p_eps,valid", [
        (1.0, 0.1, True),
        (0.75, 0.25, False),
        (0.75, 0.3, True),
        (0.6, 0.0, False),
    ])
    def test_sum_of_products(self, p_alpha, p_eps, valid):
        verdict = check_schedule(Schedule.power(1.0, 1.0, p_alpha), Schedule.power(1.0, 1.0, p_eps),
                                 CheckMode.THEOREM2)
        assert verdict.is_valid is valid

    def test_unknown_family_is_undecidable(self, harmonic):
        verdict = check_schedule(harmonic, Schedule('geometric', 1.0), 'theorem2')
        assert verdict.verdict == Verdict.UNDECIDABLE
        assert str(verdict) == "theorem2: undecidable (unknown family 'geometric')"

    def test_bad_mode(self, harmonic):
        with pytest.raises(ValueError):
            check_schedule(harmonic, harmonic, 'theorem3')

    def test_run_mode(self, harmonic):
        assert run_mode(Schedule.constant(0.5)) == CheckMode.THEOREM1
        assert run_mode(Schedule.constant(0.0)) == CheckMode.THEOREM2
        assert run_mode(harmonic) == CheckMode.THEOREM2
