"""The same workflow through the command-line interface.

Equivalent shell session:

    utscal synth --n 20000 --k 10 --t0 2.5 --seed 0 --out data.csv
    utscal split --in data.csv --has-labels --frac 0.2 --seed 0 --out-calib calib.csv --out-test test.csv
    utscal fit-uts --in calib.csv --has-labels --out-json uts.json
    utscal evaluate --in test.csv --t <T from uts.json> --out-json report.json
"""
import json
import pathlib
import tempfile

from utscal.cli import main

work = pathlib.Path(tempfile.mkdtemp())
f = lambda name: str(work / name)

main(["synth", "--n", "20000", "--k", "10", "--t0", "2.5", "--seed", "0", "--out", f("data.csv")])
main(["split", "--in", f("data.csv"), "--has-labels", "--frac", "0.2", "--seed", "0",
      "--out-calib", f("calib.csv"), "--out-test", f("test.csv")])
main(["fit-uts", "--in", f("calib.csv"), "--has-labels", "--out-json", f("uts.json")])
T = json.loads(pathlib.Path(f("uts.json")).read_text())["temperature"]["value"]

for t in ("1.0", repr(T)):
    main(["evaluate", "--in", f("test.csv"), "--t", t, "--out-json", f("report.json")])
    r = json.loads(pathlib.Path(f("report.json")).read_text())
    print(f"T={r['temperature']['value']:.4f} ({r['temperature']['method']}): "
          f"accuracy={r['accuracy']:.4f} NLL={r['nll_mean']:.4f} ECE={r['ece_percent']:.3f}%")
print(f"files written to {work}")
