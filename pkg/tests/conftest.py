import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fundlog.frames import frame_from_succ, identity_frame, make_frame, total_frame  # noqa: E402
from fundlog.lattice import chain, lattice_from_pairs, validate_fundamental  # noqa: E402


def chain2():
    return validate_fundamental(chain(2, ["0", "1"]), [1, 0])


def chain3():
    """0 < m < 1 with the pseudocomplement."""
    return validate_fundamental(chain(3, ["0", "m", "1"]), [2, 0, 0])


def diamond():
    lat = lattice_from_pairs(["0", "p", "q", "1"], [("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")])
    return validate_fundamental(lat, [3, 2, 1, 0])


def loop():
    return frame_from_succ([1], ["x"])


def id2():
    return identity_frame(2, ["a", "b"])


def tot2():
    return total_frame(2, ["a", "b"])


@pytest.fixture
def lattices():
    return {"chain2": chain2(), "chain3": chain3(), "diamond": diamond()}


@pytest.fixture
def frames():
    return {
        "loop": loop(),
        "id2": id2(),
        "tot2": tot2(),
        "swap": make_frame(2, [(0, 1), (1, 0)], ["a", "b"]),
    }


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
