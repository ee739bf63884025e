import json
import logging

import numpy as np
import pytest

from epsilon_consensus.core.exceptions import ConfigurationError, ValidationError
from epsilon_consensus.core.schedule import Schedule, check_schedule
from epsilon_consensus.utils.decorators import timed
from epsilon_consensus.utils.env_parser import EnvParser
from epsilon_consensus.utils.helpers import format_interval, format_sig, format_vector
from epsilon_consensus.utils.logging import SimulationLogger
from epsilon_consensus.utils.validation import Validator


class TestValidator:
    def test_float_list(self):
        assert Validator.parse_float_list('x0', '1, 0, 5, -1') == [1.0, 0.0, 5.0, -1.0]
        assert Validator.parse_float_list('lower', '-inf, 0', allow_inf=True) == [-np.inf, 0.0]
        with pytest.raises(ValidationError):
            Validator.parse_float_list('lower', '-inf, 0')

    def test_edge(self):
        assert Validator.parse_edge('1,2') == (1, 2, 1.0)
        assert Validator.parse_edge(' 3 , 4 , 0.5 ') == (3, 4, 0.5)
        with pytest.raises(ValidationError):
            Validator.parse_edge('1')

    def test_int_and_bool(self):
        assert Validator.parse_int('iters', ' 10 ', minimum=0) == 10
        with pytest.raises(ValidationError):
            Validator.parse_int('iters', -1, minimum=0)
        with pytest.raises(ValidationError):
            Validator.parse_int('iters', True)
        assert Validator.parse_bool('logging.enabled', 'off') is False
        with pytest.raises(ValidationError):
            Validator.parse_bool('logging.enabled', 'maybe')


class TestEnvParser:
    def test_default_value(self, monkeypatch):
        monkeypatch.delenv('EC_UNSET', raising=False)
        assert EnvParser.parse_value('${EC_UNSET:fallback}/x') == 'fallback/x'
        with pytest.raises(ConfigurationError, match="EC_UNSET is not set in 'output'"):
            EnvParser.parse_value('${EC_UNSET}/x', key='output')

    def test_nested_config(self, monkeypatch):
        monkeypatch.setenv('EC_WEIGHT', '2')
        parsed = EnvParser.parse_config({'edge': ['1,2,${EC_WEIGHT}'], 'iters': 5})
        assert parsed == {'edge': ['1,2,2'], 'iters': 5}

    def test_missing_env_file(self, tmp_path):
        assert EnvParser.load_env_file(str(tmp_path / '.env')) is False
        assert EnvParser.load_env_file(None) is False


class TestHelpers:
    def test_format(self):
        assert format_sig(4.0) == '4'
        assert format_sig(1 / 3) == '0.333333'
        assert format_sig(None) == '-'
        assert format_vector([0.0, 3.6]) == '[0, 3.6]'
        assert format_interval(-7.0, 4.0) == '[-7, 4]'

    def test_timed(self):
        result, elapsed = timed(lambda a, b: a + b)(2, 3)
        assert result == 5
        assert elapsed >= 0


class TestSimulationLogger:
    def test_events_are_json(self, caplog):
        logger = SimulationLogger()
        with caplog.at_level(logging.INFO, logger='epsilon_consensus'):
            run_id = logger.log_run_start('plain', 10, 4, 1)
            logger.log_progress(5, np.float64(0.25))
        events = [json.loads(r.getMessage()) for r in caplog.records]
        assert events[0]['type'] == 'RUN_START'
        assert events[0]['run_id'] == run_id
        assert events[1]['type'] == 'PROGRESS'
        assert events[1]['consensus_error'] == 0.25

    def test_disabled_logger_is_silent(self, caplog, quiet_logger):
        with caplog.at_level(logging.DEBUG, logger='epsilon_consensus'):
            quiet_logger.log_run_start('plain', 10, 4, 1)
        assert caplog.records == []

    def test_invalid_schedule_is_a_warning(self, caplog):
        verdict = check_schedule(Schedule.constant(0.1), Schedule.constant(0.1), 'theorem1')
        with caplog.at_level(logging.INFO, logger='epsilon_consensus'):
            SimulationLogger().log_schedule_verdict(verdict, Schedule.constant(0.1))
        assert caplog.records[0].levelno == logging.WARNING
        assert json.loads(caplog.records[0].getMessage())['alpha'] == '0.1'

    def test_from_config(self):
        logger = SimulationLogger.from_config({'enabled': False, 'level': 'debug'})
        assert logger.log_level == logging.DEBUG
        assert not logger.enabled
