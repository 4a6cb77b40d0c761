"""Walk-through: the full simulate -> report -> plot pipeline.

Runs a small one-way sweep through the command-line tools and leaves the
artifacts (results CSV, pivot table, figure) in demos/output/.

Run:  python demos/simulation_pipeline_demo.py
"""

import json
import pathlib
import subprocess
import sys

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

config = {
    "mode": "oneway",
    "m": 20,
    "n": 50,
    "pi": [0.2, 0.4, 0.6, 0.8],
    "pi_dot": 0.5,          # half the groups carry no signal at all
    "lambda": 0.5,
    "alpha": 0.05,
    "procedures": ["naive_adaptive_bh", "adaptive_gbh:one_way", "lsl_gbh", "tst_gbh"],
    "reps": 200,
    "seed": 42,
}
config_path = out_dir / "sweep.json"
config_path.write_text(json.dumps(config, indent=2))

results = out_dir / "results.csv"
pivot = out_dir / "pivot.csv"
figure = out_dir / "curves.png"


def run(*argv):
    print("$", " ".join(argv))
    subprocess.run([sys.executable, "-m", *argv], check=True)


run("gbh.cli", "simulate", "--config", str(config_path), "--out", str(results))
run("gbh.cli", "report", "--in", str(results), "--out", str(pivot))
print("\npivot table:")
print(pivot.read_text())

try:
    run("gbh_plots.cli", str(results), str(figure))
    print(f"figure written to {figure}")
except (subprocess.CalledProcessError, ModuleNotFoundError) as exc:
    print(f"plotting skipped ({exc}); install the plots package to render figures")
