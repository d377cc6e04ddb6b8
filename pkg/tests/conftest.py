import numpy as np
import pytest

from sisnet.graph import (
    PowerLaw,
    build_configuration_model,
    circulant_graph,
    degree_sequence_from_distribution,
    sample_degree_sequence,
    star_graph,
)


@pytest.fixture
def star():
    return star_graph(4)


@pytest.fixture
def ring4():
    # 4-regular on 40 nodes
    return circulant_graph(40, 4)


@pytest.fixture(scope="session")
def powerlaw_graph():
    rng = np.random.default_rng(7)
    seq = sample_degree_sequence(PowerLaw(2.5, 2, 30), 2000, rng)
    return build_configuration_model(seq, rng)


@pytest.fixture(scope="session")
def small_graph():
    """300 nodes with degrees 2..6, P(k) proportional to k^-2."""
    ks = np.arange(2, 7)
    p = ks ** -2.0
    seq = degree_sequence_from_distribution(ks, p / p.sum(), 300)
    return build_configuration_model(seq, np.random.default_rng(1))


def pytest_terminal_summary(terminalreporter):
    import acceptance_report

    lines = acceptance_report.lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
