import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("lab", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lab")


@pytest.fixture(scope="session")
def unit_circle():
    from besovlab import Circle, build_curve
    return build_curve(Circle(1.0), 512)


@pytest.fixture(scope="session")
def trefoil():
    """r = 1 + 0.3 cos 3θ, the bumpy starlike test curve."""
    from besovlab import RadialLipschitz, build_curve
    return build_curve(RadialLipschitz.from_modes({3: 0.3}), 512)


def segment_distance(z, a, b):
    """Brute-force distance from points ``z`` to segments ``[a, b]`` (all pairs)."""
    z = np.asarray(z, dtype=complex)[..., None]
    d = b - a
    t = np.clip(((z - a) * np.conj(d)).real / np.abs(d) ** 2, 0, 1)
    return np.abs(z - (a + t * d)).min(axis=-1)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
