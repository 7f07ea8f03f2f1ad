import functools
from importlib import resources
from pathlib import Path

from hypothesis import HealthCheck, settings

from realizability.instance import parse_instance
from realizability.oca_core import derive_oca

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

DATA = Path(__file__).parent / "data"
FIXTURE_DIR = resources.files("realizability").joinpath("fixtures")
FIXTURES = sorted(p.name[:-5] for p in FIXTURE_DIR.iterdir() if p.name.endswith(".json"))
NONTRIVIAL = [n for n in FIXTURES if n.startswith(("gen_", "chain_"))]
PINNED = "chain_6x3"  # the pinned nontrivial fixture used where one is needed


def fixture_path(name):
    return Path(str(FIXTURE_DIR.joinpath(name + ".json")))


@functools.lru_cache(maxsize=None)
def load(name):
    return parse_instance(fixture_path(name))


@functools.lru_cache(maxsize=None)
def oca_of(name):
    return derive_oca(load(name))


def paks_of(name):
    obj = load(name)
    return getattr(obj, "paks", obj)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
