from pathlib import Path

import pytest
from hypothesis import settings

from quorumlace.model import Pfps, normalize_config
from quorumlace.serialize import load_config

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

settings.register_profile("quorumlace", max_examples=60, deadline=None)
settings.load_profile("quorumlace")

E4_RAW = {
    "p1": (["p1", "p2", "p3", "p4"], [["p3", "p4"]]),
    "p2": (["p1", "p2", "p3", "p4"], [["p1", "p4"]]),
    "p3": (["p1", "p2", "p3", "p4"], [["p1", "p4"]]),
    "p4": (["p1", "p2", "p3", "p4"], [["p1", "p2"]]),
}


def make_e4() -> Pfps:
    return Pfps({p: normalize_config(t, fp) for p, (t, fp) in E4_RAW.items()})


def make_e1() -> Pfps:
    return Pfps({"p1": normalize_config(["p1"], [])})


def make_pairs() -> Pfps:
    """Two groups {p1,p2} and {p3,p4}, each trusting only itself."""
    left = normalize_config(["p1", "p2"], [])
    right = normalize_config(["p3", "p4"], [])
    return Pfps({"p1": left, "p2": left, "p3": right, "p4": right})


@pytest.fixture
def e4() -> Pfps:
    return make_e4()


@pytest.fixture
def e1() -> Pfps:
    return make_e1()


@pytest.fixture
def pairs() -> Pfps:
    return make_pairs()


@pytest.fixture
def samples() -> Path:
    return SAMPLES


def test_e4_sample_matches_fixture(e4):
    f, league = load_config(SAMPLES / "e4.json")
    assert f == e4
    assert league == e4.universe


# --- acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict = {}


def record(criterion: int, part: str, ok: bool, detail: str) -> None:
    """Remember one acceptance check; a criterion passes when all its parts do."""
    ACCEPTANCE.setdefault(criterion, []).append((part, ok, detail))
    print(f"criterion {criterion} [{part}]: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[criterion]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {criterion}: {verdict}")
        for part, ok, detail in parts:
            terminalreporter.write_line(f"    {part}: {'PASS' if ok else 'FAIL'} {detail}")
