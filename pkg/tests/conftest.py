import pytest

from chaintrace.corpus import CorpusParams, gen_corpus

# Moderate corpus shared by module tests; acceptance builds its own.
MODULE_CORPUS_PARAMS = CorpusParams(seed=11, n_addresses=40, n_reddit_users=14)


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    manifest = gen_corpus(MODULE_CORPUS_PARAMS, out)
    return out, manifest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", None) != "call":
                continue
            if "test_acceptance" in str(report.nodeid):
                rows.append((report.nodeid.split("::")[-1], status.upper()))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"{status:<7} {name}")
