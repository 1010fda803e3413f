from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

HEADER = "scenario,system,N,alpha1,alpha2,L1_km,L2_km,metric,mean,sd,n,converged_fraction,seed"


def fmt(x):
    return f"{x:.17g}"


@pytest.fixture
def make_csv(tmp_path):
    """Factory writing schema-correct CSVs; rows are tuples matching the header."""

    def build(rows, name="data.csv", header=HEADER):
        lines = [header]
        for row in rows:
            lines.append(",".join("" if v is None else str(v) for v in row))
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n")
        return path

    return build


def lines_row(scenario, n, l1, mean, sd, metric="fidelity"):
    return (scenario, "qubit", n, "0.2", "", fmt(l1), "", metric, fmt(mean), fmt(sd), 220, "1", 7)


def grid_row(l1, l2, mean, metric="concurrence", scenario="map"):
    return (
        scenario,
        "two_qubit",
        200,
        "0.2",
        "0.2",
        fmt(l1),
        fmt(l2),
        metric,
        fmt(mean),
        "0.1",
        100,
        "1",
        7,
    )
