import pytest
from hypothesis import HealthCheck, settings

from costly_attention.dist import CutoffDensity, Prior, TypePopulation
from costly_attention.sender import Scenario

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def uniform():
    return Prior("uniform")


@pytest.fixture(scope="session")
def triangular():
    return CutoffDensity("triangular", peak=0.5)


def scenario(lam, cutoff, prior=None, **kw):
    return Scenario(prior or Prior("uniform"), TypePopulation.degenerate(lam, cutoff), **kw)


@pytest.fixture(scope="session")
def tri_scn(triangular):
    return scenario(0.02, triangular)



def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
