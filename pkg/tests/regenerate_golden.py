"""Rewrite the committed golden outputs from the bundled examples.

Only run this after checking a change in results is intended.
"""
from pathlib import Path

from glpd.cli import main

EXAMPLES = Path(__file__).resolve().parents[1] / "src" / "glpd" / "examples"
GOLDEN = Path(__file__).resolve().parent / "golden"

RUNS = {
    "strip_tension": ["simulate", "--config", str(EXAMPLES / "strip_tension" / "config.ini"), "--out"],
    "notched_strip": ["simulate", "--config", str(EXAMPLES / "notched_strip" / "config.ini"), "--out"],
    "point_uniaxial": [
        "point-test",
        "--config", str(EXAMPLES / "point_uniaxial" / "config.ini"),
        "--path", str(EXAMPLES / "point_uniaxial" / "uniaxial.path"),
        "--out",
    ],
}


def output_target(name: str, root: Path) -> Path:
    return root / name / "point.csv" if name == "point_uniaxial" else root / name


if __name__ == "__main__":
    for name, argv in RUNS.items():
        target = output_target(name, GOLDEN)
        target.parent.mkdir(parents=True, exist_ok=True)
        assert main(argv + [str(target)]) == 0, name
        print("wrote", target)
