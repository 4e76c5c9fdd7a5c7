import importlib.util
from pathlib import Path

import pandas as pd
import pytest

SCRIPT = Path(__file__).resolve().parents[1] / "scripts" / "k_table.py"


@pytest.fixture(scope="module")
def k_table_script():
    spec = importlib.util.spec_from_file_location("k_table_script", SCRIPT)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture
def table():
    return pd.DataFrame(
        {"level": [1, 2], "K": [1, 4], "subgroup_order": [2, 4], "ball_size": [4, 44]}
    )


def test_rst_list_table(k_table_script, table):
    lines = k_table_script.to_rst(table).splitlines()
    assert lines[0] == ".. list-table:: Star radius K per level"
    assert lines[1] == "   :header-rows: 1"
    rows = [line for line in lines if line.startswith("   * -")]
    assert rows == ["   * - :math:`n`", "   * - 1", "   * - 2"]
    assert "     - :math:`|B(K)|`" in lines
    assert lines[-1] == "     - 44"
    # one header row and one row per level, four cells each
    assert sum(line.lstrip().startswith(("* -", "-")) for line in lines) == 12


def test_latex_rows(k_table_script, table):
    tex = k_table_script.to_latex(table, caption="K")
    assert r"\caption{K}" in tex
    assert r"2 & 4 & 4 & 44 \\" in tex
