import pytest

from baergeom.gf import SUPPORTED_Q, ExtensionEmbedding, FieldSpec


@pytest.fixture(scope="session")
def fields():
    return {q: FieldSpec.of_order(q) for q in SUPPORTED_Q}


@pytest.fixture(scope="session")
def embeddings():
    return {q: ExtensionEmbedding.default(q) for q in SUPPORTED_Q}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
