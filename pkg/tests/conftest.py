import numpy as np
import pytest

from deltap.data import BinaryMatrix, ContingencyTable

# Toy dataset with six instances: V1 in {X, Y, Z}, V2 binary.
TABLE2_V1 = ["Y", "Z", "X", "X", "Y", "X"]
TABLE2_V2 = [1, 0, 1, 0, 0, 1]

# Joy/admiration counts, rows = admiration, columns = joy.
JOY_ADMIRATION = ContingencyTable(4274, 112, 205, 22, "admiration", "joy")
# Grief/sadness counts from the Venn diagram: 3 grief only, 194 sadness only, 8 both.
GRIEF_SADNESS = ContingencyTable(4408, 194, 3, 8, "grief", "sadness")


@pytest.fixture
def table2_csv(tmp_path):
    path = tmp_path / "table2.csv"
    lines = ["V1,V2"] + [f"{a},{b}" for a, b in zip(TABLE2_V1, TABLE2_V2)]
    path.write_text("\n".join(lines) + "\n")
    return path


def matrix_from_table(table: ContingencyTable) -> BinaryMatrix:
    """Expand counts into explicit instances (A, B)."""
    rows = (
        [(0, 0)] * table.n00 + [(0, 1)] * table.n01 + [(1, 0)] * table.n10 + [(1, 1)] * table.n11
    )
    return BinaryMatrix((table.label_a, table.label_b), np.array(rows))
