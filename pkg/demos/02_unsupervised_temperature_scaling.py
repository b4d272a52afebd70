"""Fitting a temperature without labels, next to the supervised fit.

Labels are stripped from the calibration split before the unsupervised fit;
they are only used afterwards to score the result on the test split.
"""
import numpy as np

from utscal import SynthConfig, evaluate, fit_ts, fit_uts, generate, split

for t0 in (1.0, 2.5, 4.0):
    data = generate(SynthConfig(n_samples=50_000, n_classes=10, true_temperature=t0, seed=1))
    calib, test = split(data, 0.2, seed=1)

    T_uts, subsets = fit_uts(calib.without_labels())
    T_ts = fit_ts(calib)

    print(f"\nT0 = {t0}")
    print(f"  per-class thresholds: {np.round(subsets.thresholds, 3)}")
    print(f"  per-class subset sizes: {subsets.sizes}")
    for name, T in (("uncalibrated", 1.0), ("TS", T_ts), ("UTS", T_uts)):
        r = evaluate(test, T)
        print(f"  {name:13} T={r.temperature:6.3f}  NLL={r.nll_mean:.4f}  ECE={r.ece_percent:6.3f}%")
