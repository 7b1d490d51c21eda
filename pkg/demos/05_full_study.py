"""Run both study presets end to end (simulated participants), then show the
written artifacts and a condensed report.

Run: python demos/05_full_study.py [out_dir]
"""

import sys
import tempfile
from pathlib import Path

from portalbench.harness import preset_config, run_batch

out_root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())

for preset in ("study1_task1", "study1_task2"):
    config = preset_config(preset, master_seed=7)
    result = run_batch(config, out_root / preset)
    n_trials = sum(len(s.logs) for s in result.sessions)
    print(f"{preset}: {config.participants} participants, {n_trials} trials")
    for path in result.files:
        print(f"  wrote {path}")
    report = (out_root / preset / "report.txt").read_text().strip().splitlines()
    for line in report[:14]:
        print(f"  | {line}")
    print()

print("Re-analyze or import with the CLI:")
print(f"  portalbench report --in {out_root / 'study1_task1'}")
print(f"  portalbench import --logs {out_root / 'study1_task1' / 'trial_logs.csv'} "
      f"--out {out_root / 'reimported'}")
