import pathlib
import time

import pytest

from boussinesq_lab import load_config, run

CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"
VERDICTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[VERDICTS] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts = config.stash.get(VERDICTS, {})
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(verdicts):
        ok, title, detail = verdicts[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}  {title}: {detail}")


@pytest.fixture
def verdict(request, capsys):
    """Record (and print) one PASS/FAIL line for an acceptance criterion."""

    def record(n, ok, title, detail):
        request.config.stash[VERDICTS][n] = (bool(ok), title, detail)
        with capsys.disabled():
            print(f"\ncriterion {n} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return bool(ok)

    return record


@pytest.fixture(scope="session")
def long_run():
    """Run a config from configs/ once per session; returns (result, seconds)."""
    cache = {}

    def get(name):
        if name not in cache:
            cfg = load_config(CONFIGS / f"{name}.ini")
            t0 = time.perf_counter()
            res = run(cfg)
            cache[name] = (res, time.perf_counter() - t0)
        return cache[name]

    return get
