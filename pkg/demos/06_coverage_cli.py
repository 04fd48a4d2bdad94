"""Running a coverage experiment through the command line entry point.

Equivalent shell command:

    honest-credible coverage --config demos/configs/coverage_small.json --output-dir out/coverage
"""

import tempfile
from pathlib import Path

from honest_credible.cli import main

config = Path(__file__).with_name("configs") / "coverage_small.json"
with tempfile.TemporaryDirectory() as tmp:
    main(["coverage", "--config", str(config), "--output-dir", tmp])
    text = (Path(tmp) / "coverage.csv").read_text()
    print(text.splitlines()[0])
    print(text.splitlines()[1])
    print((Path(tmp) / "coverage_summary.json").read_text()[:300])

main(["radius", "--alpha", "1", "--n", "10000", "--gamma", "0.05"])
main(["check-bounds"])
