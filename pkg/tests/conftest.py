import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "app"))

from epsilon_consensus.core.graph import CommGraph  # noqa: E402
from epsilon_consensus.core.reference import solve_saddle  # noqa: E402
from epsilon_consensus.core.schedule import Schedule  # noqa: E402
from epsilon_consensus.problem import Interval, lasso_instance  # noqa: E402
from epsilon_consensus.utils.logging import SimulationLogger  # noqa: E402

CONFIG_DIR = ROOT / "configs"
EXAMPLE_EDGES = [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 3, 1.0)]
EXAMPLE_X0 = [1.0, 0.0, 5.0, -1.0]


def example_sets():
    """X_i = [-11 + i, 8 - i]"""
    return [Interval(-11 + i, 8 - i) for i in range(1, 5)]


@pytest.fixture
def example_graph():
    return CommGraph.from_edges(4, EXAMPLE_EDGES)


@pytest.fixture
def lasso_problem():
    return lasso_instance(4, 0.1, [2.0, 4.0, 6.0, 8.0], example_sets())


@pytest.fixture
def harmonic():
    """3 / (k + 1), used for both alpha and eps"""
    return Schedule.power(3.0, 1.0, 1.0)


@pytest.fixture
def x_init():
    return np.array(EXAMPLE_X0)[:, None]


@pytest.fixture
def example_saddle(example_graph, lasso_problem):
    return solve_saddle(example_graph, lasso_problem)


@pytest.fixture
def quiet_logger():
    return SimulationLogger(enabled=False)


@pytest.fixture
def plain_config():
    return str(CONFIG_DIR / "lasso_plain.conf")


@pytest.fixture
def normalized_config():
    return str(CONFIG_DIR / "lasso_normalized.conf")


@pytest.fixture
def constant_eps_config():
    return str(CONFIG_DIR / "lasso_constant_eps.conf")


@pytest.fixture
def write_config(tmp_path):
    """Write a config built from the plain example with some lines replaced"""
    def write(name="custom.conf", replace=None, drop=(), extra=()):
        replace = replace or {}
        lines = []
        for line in (CONFIG_DIR / "lasso_plain.conf").read_text().splitlines():
            key = line.split("=", 1)[0].strip() if "=" in line else None
            if key in drop:
                continue
            if key in replace:
                value = replace.pop(key)
                if value is None:
                    continue
                line = f"{key} = {value}"
            lines.append(line)
        lines.extend(f"{key} = {value}" for key, value in replace.items())
        lines.extend(extra)
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n")
        return str(path)
    return write
