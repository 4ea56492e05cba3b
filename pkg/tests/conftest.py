import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from copkit.cli import data_path  # noqa: E402
from copkit.distance import load_table  # noqa: E402
from copkit.tm import load_tm  # noqa: E402

# Words from the a^n b^n c^n self-similarity walkthrough.
S = "a" * 6 + "b" * 6 + "c" * 6
R = {
    1: "a" * 6 + "b" * 6 + "a" * 6,
    2: "a" * 6 + "b" * 6 + "c" * 3,
    3: "a" * 5 + "b" * 5 + "c" * 5,
    4: "a" * 7 + "b" * 7 + "c" * 7,
    5: "c" + "a" * 5 + "b" * 5 + "c" * 4,
    6: "c" * 3 + "a" * 6 + "b" * 5 + "c" * 4 + "b" * 2,
    7: "c" * 3 + "a" * 6 + "b" * 5 + "c" * 3,
}
R[8] = R[6]
RS = [R[i] for i in range(1, 9)]

# (x, y, printed value) for every distance listed in the walkthrough,
# plus the reversed r4 -> r2 pair quoted as an asymmetry example.
EXAMPLE_NCD = [
    ("s", 1, 0.3125), ("s", 2, 0.176471), ("s", 3, 0.25), (2, 3, 0.294118),
    ("s", 4, 0.4375), (2, 4, 0.470588), (3, 4, 0.5625),
    ("s", 5, 0.25), (2, 5, 0.235294), (3, 5, 0.1875), (4, 5, 0.25),
    ("s", 6, 0.35), (2, 6, 0.3), (3, 6, 0.3), (4, 6, 0.3), (5, 6, 0.25),
    ("s", 7, 0.263158), (2, 7, 0.210526), (3, 7, 0.210526), (4, 7, 0.210526), (5, 7, 0.157895),
    (7, 8, 0.15),
    (4, 2, 0.235294),
]


def word(key):
    return S if key == "s" else R[key]


@pytest.fixture(scope="session")
def anbncn():
    return load_tm(data_path("machines/anbncn.tm"))


@pytest.fixture(scope="session")
def example_table():
    return load_table(data_path("oracles/example_ncd.tsv"))


@pytest.fixture(scope="session")
def golden():
    return json.loads((Path(__file__).parent / "golden.json").read_text())


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
