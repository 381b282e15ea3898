import pytest

from gtloc.bench.texture import SyntheticTexture, render_view
from gtloc.geometry import Pose2D
from gtloc.mapstore import TextureMap

CRITERIA = {
    1: "identity matching equals brute-force scan",
    2: "rigid estimation exact, RANSAC robust to 30% outliers",
    3: "global localization on rich 10x10 map",
    4: "prior benefit and smooth-texture degradation",
    5: "timing scaling with considered images",
    6: "memory accounting of map records",
    7: "vote conservation and winner correctness",
    8: "map mutability",
    9: "bench report determinism",
}

_outcomes: dict[int, list[bool]] = {}
_details: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.failed and rep.when == "setup"):
        _outcomes.setdefault(marker.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        verdict = "PASS" if all(_outcomes[n]) else "FAIL"
        extra = "; ".join(_details.get(n, []))
        line = f"criterion {n}: {verdict}  {CRITERIA.get(n, '')}"
        terminalreporter.write_line(line + (f"  [{extra}]" if extra else ""))


@pytest.fixture
def detail():
    """Attach a measured value to an acceptance criterion's summary line."""

    def add(n: int, text: str) -> None:
        _details.setdefault(n, []).append(text)

    return add


W, H = 160, 120


@pytest.fixture(scope="session")
def rich_texture():
    return SyntheticTexture(seed=11, width=640, height=480)


@pytest.fixture(scope="session")
def small_world(rich_texture):
    """3x3 grid of 160x120 views with 50% overlap and the map built from them."""
    m = TextureMap()
    poses = []
    for r in range(3):
        for c in range(3):
            p = Pose2D(60 + 80 * c, 60 + 60 * r, 0.0)
            m.add_reference(render_view(rich_texture, p, W, H), p)
            poses.append(p)
    return rich_texture, m, poses
