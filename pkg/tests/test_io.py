import json

import numpy as np
import pytest

from utscal.core import DomainError, InputError, LogitDataset, Method, Temperature, UsageError, tempered_softmax
from utscal.io import (CalibrationReport, evaluate, read_logits_csv, split, split_indices, write_logits_csv)
from utscal.metrics import ece, nll_stats
from utscal.synth import SynthConfig, generate
from utscal.ts import fit_ts


def write(tmp_path, text, name="in.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestCSV:
    def test_with_labels(self, tmp_path):
        d = read_logits_csv(write(tmp_path, "1.0,2.0,0\n0.5,0.2,1\n"), has_labels=True)
        assert (d.n_samples, d.n_classes) == (2, 2)
        assert d.labels.tolist() == [0, 1]

    def test_without_labels(self, tmp_path):
        d = read_logits_csv(write(tmp_path, "1.0,2.0\n"))
        assert (d.n_samples, d.n_classes, d.has_labels) == (1, 2, False)

    def test_header_is_skipped_on_request(self, tmp_path):
        d = read_logits_csv(write(tmp_path, "a,b,label\n1,2,1\n"), has_labels=True, header=True)
        assert d.logits.tolist() == [[1.0, 2.0]]

    def test_ragged_rows(self, tmp_path):
        with pytest.raises(InputError, match="line 2"):
            read_logits_csv(write(tmp_path, "1,2,3\n1,2\n"))

    def test_non_numeric_cell(self, tmp_path):
        with pytest.raises(InputError, match="line 2, column 3"):
            read_logits_csv(write(tmp_path, "1,2,3\n1,2,x\n"))

    def test_label_out_of_range(self, tmp_path):
        with pytest.raises(InputError, match="outside"):
            read_logits_csv(write(tmp_path, "1,2,0\n1,2,2\n"), has_labels=True)

    def test_non_integer_label(self, tmp_path):
        with pytest.raises(InputError, match="integer"):
            read_logits_csv(write(tmp_path, "1,2,0.5\n"), has_labels=True)

    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        d = LogitDataset(rng.normal(0, 1e3, (50, 7)) * rng.uniform(1e-8, 1, (50, 7)), rng.integers(0, 7, 50))
        path = tmp_path / "rt.csv"
        write_logits_csv(path, d)
        back = read_logits_csv(path, has_labels=True)
        assert np.array_equal(back.logits, d.logits)
        assert np.array_equal(back.labels, d.labels)

    def test_write_without_labels(self, tmp_path):
        d = LogitDataset([[1.5, -2.0]], [1])
        path = tmp_path / "x.csv"
        write_logits_csv(path, d, include_labels=False)
        assert path.read_text() == "1.5,-2.0\n"


class TestSplit:
    def test_twenty_eighty(self):
        cal, test = split_indices(10, 0.2, seed=0)
        assert (len(cal), len(test)) == (2, 8)

    def test_at_least_one_calibration_sample(self):
        cal, test = split_indices(2, 0.2, seed=0)
        assert (len(cal), len(test)) == (1, 1)

    def test_deterministic(self):
        a = split_indices(100, 0.2, seed=5)
        b = split_indices(100, 0.2, seed=5)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    @pytest.mark.parametrize("n,frac,seed", [(10, 0.2, 1), (101, 0.37, 2), (7, 0.99, 3)])
    def test_disjoint_and_exhaustive(self, n, frac, seed):
        cal, test = split_indices(n, frac, seed)
        assert sorted(np.concatenate([cal, test]).tolist()) == list(range(n))

    @pytest.mark.parametrize("frac", [0.0, 1.0, -0.1, 1.5])
    def test_bad_fraction(self, frac):
        with pytest.raises(DomainError):
            split_indices(10, frac)

    def test_keeps_labels(self):
        d = generate(SynthConfig(20, 3, 1.0, seed=0))
        cal, test = split(d)
        assert cal.has_labels and test.has_labels
        assert not split(d.without_labels())[0].has_labels


class TestEvaluate:
    def test_unit_temperature_matches_plain_metrics(self):
        d = generate(SynthConfig(500, 4, 2.0, seed=1))
        r = evaluate(d, 1.0)
        p = tempered_softmax(d, 1.0)
        assert r.method is Method.FIXED and r.temperature == 1.0
        assert r.nll_mean == nll_stats(p, d.labels).mean
        assert r.ece_fraction == pytest.approx(ece(p, d.labels, 15)[0], abs=1e-15)
        assert len(r.bins) == r.n_bins == 15
        assert r.ece_percent == 100 * r.ece_fraction

    def test_fitted_temperature_beats_identity(self):
        d = generate(SynthConfig(50_000, 10, 2.5, seed=0))
        T = fit_ts(d)
        before, after = evaluate(d, 1.0), evaluate(d, T)
        assert after.method is Method.TS
        assert after.nll_mean < before.nll_mean and after.ece_fraction < before.ece_fraction
        assert after.accuracy == before.accuracy

    def test_needs_labels(self):
        with pytest.raises(UsageError):
            evaluate(LogitDataset([[0.0, 1.0]]), 1.0)

    def test_underflow_is_flagged(self):
        r = evaluate(LogitDataset([[0.0, 2000.0]], [0]), 1.0)
        assert any("clamped" in w for w in r.warnings)


class TestReportJSON:
    def test_round_trip(self):
        d = generate(SynthConfig(300, 3, 2.0, seed=2))
        r = evaluate(d, Temperature(1.7, Method.UTS, 10.0, 5), 10, uts_audit={"thresholds": [0.1, 0.2, 0.3]})
        text = r.to_json()
        assert CalibrationReport.from_dict(json.loads(text)) == r
        assert r.to_json() == text

    def test_key_order(self):
        r = evaluate(generate(SynthConfig(50, 3, 2.0, seed=2)), 1.0)
        keys = list(json.loads(r.to_json()))
        assert keys == ["schema", "n_samples", "accuracy", "nll_mean", "nll_sum", "ece_fraction", "ece_percent",
                        "n_bins", "temperature", "bins", "warnings", "uts_audit"]

    def test_rejects_other_schema(self):
        r = evaluate(generate(SynthConfig(50, 3, 2.0, seed=2)), 1.0).to_dict()
        r["schema"] = 2
        with pytest.raises(InputError):
            CalibrationReport.from_dict(r)
