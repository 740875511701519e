"""
Shared fixtures: the wedge profile and the witch-hat family on the aligned grid
"""

import math
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from experiments.delta import witch_hat  # noqa: E402
from experiments.runner import run_flows  # noqa: E402
from exporters.trace_io import write_wedge  # noqa: E402
from solver.grid import aligned_grid  # noqa: E402
from wedge.profile import solve_wedge  # noqa: E402

HAT_NS = (10, 20, 40)
HAT_TIMES = [0.1, 0.2, 0.3, 0.35, 0.5, 2.0 / math.pi, 1.0]


@pytest.fixture(scope="session")
def wedge_profile():
    return solve_wedge()


@pytest.fixture(scope="session")
def wedge_file(wedge_profile, tmp_path_factory):
    path = tmp_path_factory.mktemp("wedge") / "wedge.csv"
    write_wedge(wedge_profile, str(path))
    return str(path)


@pytest.fixture(scope="session")
def hat_grid():
    """h = 1/400 on [-8, 8], nodes on 0 and +-1/n for every n in HAT_NS"""
    return aligned_grid(8.0, max(HAT_NS), 10)


@pytest.fixture(scope="session")
def hat_traces(hat_grid):
    tasks = [{"init": witch_hat(n), "grid": hat_grid, "t_end": HAT_TIMES[-1], "snap_times": HAT_TIMES}
             for n in HAT_NS]
    return dict(zip(HAT_NS, run_flows(tasks, jobs=len(HAT_NS))))
