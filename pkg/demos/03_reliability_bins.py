"""Reliability table before and after calibration.

Each bin lists how many test samples have a top-class confidence in that
range, their mean confidence, and how often they were right. A calibrated
model has accuracy close to mean confidence in every populated bin.
"""
from utscal import SynthConfig, evaluate, fit_uts, generate, split

calib, test = split(generate(SynthConfig(30_000, 10, 3.0, seed=2)), 0.2, seed=2)
T, _ = fit_uts(calib.without_labels())

for title, temp in (("T = 1", 1.0), (f"UTS, T = {T.value:.3f}", T)):
    report = evaluate(test, temp, n_bins=10)
    print(f"\n{title}: ECE = {report.ece_percent:.2f}%")
    print(f"  {'bin':>11} {'count':>7} {'conf':>7} {'acc':>7}")
    for b in report.bins:
        if b.count:
            print(f"  [{b.lower:.1f}, {b.upper:.1f}) {b.count:7d} {b.mean_confidence:7.3f} {b.accuracy:7.3f}")
