"""Write the experiment formulas and matching generated traces to a directory"""
import argparse
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from pathlib import Path

from stlstar.fixtures import FIXTURES
from stlstar.trace import generate, with_slope


def write_fixtures(out_dir: str, n: int = 100, seed: int = 0):
    """One formula file and a satisfying/violating trace pair per fixture"""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for name, fixture in FIXTURES.items():
        (out / f"{name}.stl").write_text(fixture.text(None) + "\n", encoding="utf-8")
        for violate in (False, True):
            trace = generate(fixture.kind, n, seed=seed, violate=violate)
            if fixture.slope:
                trace = with_slope(trace)
            suffix = "violating" if violate else "satisfying"
            trace.to_csv(out / f"{name}_{suffix}.csv")
        print(f"{name}: {fixture.text(None)}")

    # drifting pulse: levels wobble inside the tolerance, so phi3 holds and psi does not
    generate("drifting_pulse", n, seed=seed).to_csv(out / "phi3_drifting.csv")
    with_slope(generate("drifting_pulse", n, seed=seed)).to_csv(out / "psi_drifting.csv")
    print(f"Fixtures written to {out}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", default="fixtures")
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    write_fixtures(args.out_dir, args.n, args.seed)
