import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ouschauder.gaussian import build_covariance

settings.register_profile("repo", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

# acceptance tests append (criterion, passed, detail) here; printed at the end of the run
ACCEPTANCE_LINES: list[tuple[int, str, str]] = []


@pytest.fixture(scope="session")
def degenerate_model():
    """Q = diag(4, 1, 0) on R^3."""
    return build_covariance(np.diag([4.0, 1.0, 0.0]))


@pytest.fixture(scope="session")
def plane_model():
    """Q = diag(4, 1) on R^2."""
    return build_covariance(np.diag([4.0, 1.0]))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")


# reduced configuration for fast harness tests
SMALL_CONFIG = """\
[covariance]
diagonal = 4, 1, 0

[corpus.1]
kind = ridge
name = holder05
profile = abs_clip_pow
power = 0.5
direction = 1, 1, 0

[corpus.2]
kind = ridge
name = sine
profile = sine
omega = 1.5
direction = 0, 1, 0

[corpus.3]
kind = ridge
name = kernel05
profile = abs_clip_pow
power = 0.5
direction = 0, 0, 1

[corpus.4]
kind = constant
name = constant
value = 0.7

[corpus.5]
kind = linear
name = linear
coefficients = 1, 0, 0

[corpus.6]
kind = quadratic
name = quadratic
coefficients = 1, 0, 0

[suite]
alphas = 0.3, 0.7
lambdas = 1
t_min = 0.01
t_max = 5
t_count = 3
design_points = 12
design_directions = 6
ladder_max = 6
resolvent_points = 6
resolvent_directions = 4
parabolic_points = 4
parabolic_directions = 4
parabolic_times = 2
parabolic_pairs = 2:1
line_points = 41
formula_points = 3
seed = 3

[output]
format = both
"""


@pytest.fixture(scope="session")
def small_config():
    from ouschauder.harness.config import parse_config
    return parse_config(SMALL_CONFIG, "<small>")
