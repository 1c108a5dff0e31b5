"""Round-trip data through CSV and drive the command line tool.

The same steps are available from a shell as ``poisdep simulate``,
``poisdep fit``, ``poisdep assess``, ``poisdep acf`` and ``poisdep grid``.

Run: python demos/04_csv_and_cli.py
"""
import json
import tempfile
from pathlib import Path

from poisdep import ingest_csv
from poisdep.cli import cli

work = Path(tempfile.mkdtemp(prefix="poisdep-demo-"))
print("working in", work)

# %% simulate a series to CSV (label,x)
cli(["simulate", "--kind", "typeA", "--p", "2", "--alpha", "0.2", "--mu", "9", "--T", "60",
     "--seed", "7", "--out", str(work / "x.csv")])
series = ingest_csv(work / "x.csv", layout="wide")
print("read back", len(series), "series of length", series[0].T)

# %% fit, then score the fit
cli(["fit", "--data", str(work / "x.csv"), "--kind", "typeA", "--p", "2", "--iterations",
     "3000", "--burn-in", "500", "--seed", "1", "--out", str(work / "draws.csv"),
     "--summary", str(work / "summary.json")])
summary = json.loads((work / "summary.json").read_text())
print("posterior mean mu:", round(summary["mu"]["mean"], 3))

cli(["assess", "--draws", str(work / "draws.csv"), "--data", str(work / "x.csv"),
     "--nu", "0.5", "--seed", "1", "--out", str(work / "L.json")])
print("L-measure:", json.loads((work / "L.json").read_text()))

# %% empirical against theoretical ACF
cli(["acf", "--data", str(work / "x.csv"), "--kind", "typeA", "--p", "2", "--alpha", "0.2",
     "--max-lag", "4", "--out", str(work / "acf.csv")])
print((work / "acf.csv").read_text())

# %% malformed input is reported with its row, exit status 2
(work / "bad.csv").write_text("label,x\n1,3\n2,-1\n")
code = cli(["fit", "--data", str(work / "bad.csv"), "--kind", "inar1", "--seed", "1"])
print("exit status for a negative count:", code)
