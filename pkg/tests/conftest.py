import pytest

from evocom import DistributionSpec, ScenarioConfig, generate_ground_truth


def scenario(cnr=1.0, changing=False, p_in=0.5, p_out=0.05, **kw) -> ScenarioConfig:
    change = DistributionSpec.normal(0, 0.2) if changing else DistributionSpec.constant(0)
    return ScenarioConfig(p_in=p_in, p_out=p_out, core_node_ratio=cnr, size_change_dist=change, **kw)


@pytest.fixture(scope="session")
def stable_gt():
    return generate_ground_truth(scenario(1.0), seed=11)


@pytest.fixture(scope="session")
def changing_gt():
    return generate_ground_truth(scenario(0.5, changing=True), seed=12)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
