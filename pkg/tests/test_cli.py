import numpy as np
import pytest

from epsilon_consensus import EpsilonConsensus
from epsilon_consensus.cli import EXIT_ASSUMPTION, EXIT_CONFIG, EXIT_OK, EXIT_SADDLE, main
from epsilon_consensus.core.trace import read_csv
from epsilon_consensus.models.registry import ProblemRegistry
from epsilon_consensus.problem import CallableOracle, Interval, ProblemInstance


@pytest.fixture
def broken_problem():
    """Registers a problem whose oracle returns 1 no matter where it is asked"""
    def build(config):
        oracles = [CallableOracle(lambda x: float(0.5 * np.sum((x - 3.0) ** 2)),
                                  lambda x, eps: np.ones_like(x))
                   for _ in range(config.node_count)]
        return ProblemInstance(oracles, [Interval(-10, 10)] * config.node_count)

    EpsilonConsensus.register_problem('broken', build)
    yield 'broken'
    ProblemRegistry.unregister_problem('broken')


class TestRun:
    def test_writes_trace(self, plain_config, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        code = main(['run', plain_config, '--iters', '200', '--out', str(out), '--quiet'])
        printed = capsys.readouterr().out

        assert code == EXIT_OK
        assert "final residual:" in printed
        assert "iterations: 200" in printed
        assert f"✓ Trace written to {out}" in printed
        trace = read_csv(out)
        assert len(trace) == 201
        assert trace[0].residual == pytest.approx(1.0)

    def test_same_config_gives_identical_files(self, normalized_config, tmp_path):
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        for out in (first, second):
            assert main(['run', normalized_config, '--iters', '300', '--out', str(out), '--quiet']) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_disconnected_graph(self, write_config, tmp_path, capsys):
        path = write_config(drop=("edge",), extra=["edge = 1,2", "edge = 3,4"])
        code = main(['run', path, '--out', str(tmp_path / "t.csv"), '--quiet'])
        assert code == EXIT_ASSUMPTION
        assert "Assumption 2" in capsys.readouterr().out

    def test_empty_feasible_set(self, write_config, tmp_path, capsys):
        path = write_config(replace={'upper': '-8, 6, 5, 4'})
        code = main(['run', path, '--out', str(tmp_path / "t.csv"), '--quiet'])
        assert code == EXIT_ASSUMPTION
        assert "Assumption 1" in capsys.readouterr().out

    def test_malformed_config(self, write_config, tmp_path, capsys):
        path = write_config(replace={'iters': 'many'})
        assert main(['run', path, '--out', str(tmp_path / "t.csv")]) == EXIT_CONFIG
        assert "Configuration error" in capsys.readouterr().out

    def test_missing_config(self, tmp_path):
        assert main(['run', str(tmp_path / "nope.conf")]) == EXIT_CONFIG

    def test_unknown_problem(self, write_config, tmp_path):
        path = write_config(replace={'problem': 'unheard_of'})
        assert main(['run', path, '--out', str(tmp_path / "t.csv"), '--quiet']) == EXIT_CONFIG

    def test_normalized_rounds_too_small(self, write_config, tmp_path):
        path = write_config(replace={'variant': 'normalized'}, extra=["norm.rounds = 2"])
        assert main(['run', path, '--iters', '5', '--out', str(tmp_path / "t.csv"), '--quiet']) == EXIT_CONFIG


class TestCheck:
    def test_four_agent_example(self, plain_config, capsys):
        assert main(['check', plain_config, '--quiet']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[:2] == ["theorem1: invalid (ε must be a constant ε₀)", "theorem2: valid"]
        assert "connected: yes" in lines
        assert "diameter: 2" in lines
        assert "min D: 3" in lines
        assert "X = [-7, 4]" in lines

    def test_constant_eps(self, constant_eps_config, capsys):
        assert main(['check', constant_eps_config, '--quiet']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[:2] == ["theorem1: valid", "theorem2: invalid (Σαε diverges)"]

    def test_empty_interior_warning(self, write_config, capsys):
        path = write_config(replace={'lower': '-10, -9, -8, 4'})
        assert main(['check', path, '--quiet']) == EXIT_OK
        printed = capsys.readouterr().out
        assert "X = [4, 4]" in printed
        assert "warning: X has an empty interior" in printed

    def test_disconnected_graph(self, write_config, capsys):
        path = write_config(drop=("edge",), extra=["edge = 1,2", "edge = 3,4"])
        assert main(['check', path, '--quiet']) == EXIT_ASSUMPTION
        lines = capsys.readouterr().out.splitlines()
        assert lines[2] == "connected: no (components [[1, 2], [3, 4]])"
        assert not any(line.startswith("diameter") for line in lines)


class TestReference:
    def test_four_agent_example(self, plain_config, capsys):
        assert main(['reference', plain_config, '--quiet']) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "x* = 4"
        assert lines[1] == "f* = 13.6"
        assert lines[2].startswith("v* = [")
        assert lines[3] == "n = [0, 0, 0, 3.6]"

    def test_saddle_failure(self, broken_problem, write_config, capsys):
        path = write_config(replace={'problem': broken_problem})
        assert main(['reference', path, '--quiet']) == EXIT_SADDLE
        assert "Saddle point construction failed" in capsys.readouterr().out


class TestCompare:
    def test_plain_against_normalized(self, plain_config, normalized_config, tmp_path, capsys):
        out = tmp_path / "cmp.csv"
        code = main(['compare', plain_config, normalized_config, '--iters', '150',
                     '--out', str(out), '--quiet'])
        printed = capsys.readouterr().out

        assert code == EXIT_OK
        assert "a: plain" in printed
        assert "b: normalized" in printed
        lines = out.read_text().splitlines()
        assert lines[0] == "k,residual_a,residual_b"
        assert len(lines) == 152
        assert len(read_csv(tmp_path / "cmp_a.csv")) == 151
        assert len(read_csv(tmp_path / "cmp_b.csv")) == 151

    def test_identical_configs_give_identical_residuals(self, plain_config, tmp_path):
        out = tmp_path / "same.csv"
        assert main(['compare', plain_config, plain_config, '--iters', '50',
                     '--out', str(out), '--quiet']) == EXIT_OK
        rows = [line.split(',') for line in out.read_text().splitlines()[1:]]
        assert len(rows) == 51
        assert all(row[1] == row[2] for row in rows)
        assert (tmp_path / "same_a.csv").read_bytes() == (tmp_path / "same_b.csv").read_bytes()

    def test_different_setups(self, plain_config, write_config, tmp_path, capsys):
        other = write_config(replace={'x0': '0, 0, 0, 0'})
        code = main(['compare', plain_config, other, '--iters', '5',
                     '--out', str(tmp_path / "cmp.csv"), '--quiet'])
        assert code == EXIT_CONFIG
        assert "do not share" in capsys.readouterr().out


class TestParser:
    def test_no_command_prints_help(self, capsys):
        assert main([]) == EXIT_OK
        assert "usage" in capsys.readouterr().out

    def test_unknown_command(self):
        assert main(['launch']) == EXIT_CONFIG

    def test_bad_iters(self, plain_config):
        assert main(['run', plain_config, '--iters', 'x']) == EXIT_CONFIG
