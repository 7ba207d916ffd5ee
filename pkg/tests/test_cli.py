import json

import numpy as np
import pytest

from chaoseeg.cli import main
from chaoseeg.io import (
    FEATURES_HEADER,
    HISTOGRAM_HEADER,
    TRIALS_HEADER,
    read_features,
    read_recording,
    read_report,
)


def run(*argv):
    return main(list(argv))


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Recording with a chaotic and a noise channel plus trial annotations."""
    root = tmp_path_factory.mktemp("cli")
    chaos = root / "chaos.csv"
    noise = root / "noise.csv"
    assert run(
        "synth", "--system", "logistic", "--n", "3000", "--r", "4.0",
        "--x0", "0.3", "--transient", "100", "--out", str(chaos),
    ) == 0
    assert run(
        "synth", "--system", "ar1", "--n", "3000", "--phi", "0.9",
        "--seed", "7", "--out", str(noise),
    ) == 0
    samples_c, _ = read_recording(chaos)
    samples_n, _ = read_recording(noise)
    rec = root / "rec.csv"
    both = np.hstack([samples_c, samples_n])
    from chaoseeg.io import write_recording

    write_recording(rec, both, channel_names=["chaos", "noise"])
    trials = root / "trials.csv"
    rows = [TRIALS_HEADER]
    for k in range(3):
        rows.append(f"c{k + 1},chaos,{k * 1000},{(k + 1) * 1000},1")
    for k in range(3):
        rows.append(f"n{k + 1},noise,{k * 1000},{(k + 1) * 1000},-1")
    trials.write_text("\n".join(rows) + "\n")
    return root, rec, trials


@pytest.fixture(scope="module")
def features_file(workspace):
    root, rec, trials = workspace
    out = root / "features.csv"
    code = run(
        "extract", "--recording", str(rec), "--trials", str(trials),
        "--lag", "1", "--out", str(out),
    )
    assert code == 0
    return out


class TestSynth:
    def test_writes_recording_and_sidecar(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run("synth", "--system", "sine", "--n", "64", "--out", str(out)) == 0
        samples, names = read_recording(out)
        assert names == ["value"]
        assert samples.shape == (64, 1)
        sidecar = json.loads((tmp_path / "s.csv.run.json").read_text())
        assert sidecar["system"] == "sine"
        assert sidecar["n"] == 64

    def test_white_noise_dash_name(self, tmp_path):
        out = tmp_path / "w.csv"
        assert run(
            "synth", "--system", "white-noise", "--n", "10", "--seed", "3",
            "--out", str(out),
        ) == 0
        samples, _ = read_recording(out)
        assert np.array_equal(
            samples[:, 0], np.random.default_rng(3).standard_normal(10)
        )

    def test_out_of_range_param_exits_2(self, tmp_path, capsys):
        code = run(
            "synth", "--system", "logistic", "--n", "10", "--r", "5.0",
            "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2
        assert "(0, 4]" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self, tmp_path):
        assert run("synth", "--bogus", "1") == 2

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["synth", "--system", "henon", "--n", "200", "--transient", "50"]
        assert run(*args, "--out", str(a)) == 0
        assert run(*args, "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()


class TestExtract:
    def test_feature_rows_per_trial(self, features_file, workspace):
        vectors = read_features(features_file)
        assert [v.trial_id for v in vectors] == ["c1", "c2", "c3", "n1", "n2", "n3"]
        labels = {v.trial_id: v.label for v in vectors}
        assert labels["c1"] == 1 and labels["n1"] == -1
        # chaotic windows show expansion, the noise channel does not
        chaos_lle = [v.lle for v in vectors if v.label == 1]
        assert min(chaos_lle) > 0.4

    def test_sidecar_records_config(self, features_file):
        sidecar = json.loads((features_file.parent / "features.csv.run.json").read_text())
        assert sidecar["command"] == "extract"
        assert sidecar["index_params"]["lag"] == 1

    def test_missing_channel_exits_2(self, workspace, tmp_path, capsys):
        root, rec, trials = workspace
        bad = tmp_path / "bad_trials.csv"
        bad.write_text(TRIALS_HEADER + "\nt1,cz,0,1000,1\n")
        code = run(
            "extract", "--recording", str(rec), "--trials", str(bad),
            "--lag", "1", "--out", str(tmp_path / "f.csv"),
        )
        assert code == 2
        assert "cz" in capsys.readouterr().err

    def test_channel_override(self, workspace, tmp_path):
        root, rec, trials = workspace
        renamed = tmp_path / "trials.csv"
        renamed.write_text(TRIALS_HEADER + "\nt1,anything,0,1000,1\n")
        code = run(
            "extract", "--recording", str(rec), "--trials", str(renamed),
            "--channel", "chaos", "--lag", "1", "--out", str(tmp_path / "f.csv"),
        )
        assert code == 0

    def test_duplicate_trial_exits_1_with_line(self, workspace, tmp_path, capsys):
        root, rec, trials = workspace
        dup = tmp_path / "dup.csv"
        dup.write_text(
            TRIALS_HEADER + "\nt1,chaos,0,1000,1\nt1,chaos,1000,2000,1\n"
        )
        code = run(
            "extract", "--recording", str(rec), "--trials", str(dup),
            "--lag", "1", "--out", str(tmp_path / "f.csv"),
        )
        assert code == 1
        err = capsys.readouterr().err
        assert "line 3" in err and "t1" in err

    def test_missing_recording_exits_1(self, workspace, tmp_path):
        root, rec, trials = workspace
        code = run(
            "extract", "--recording", str(tmp_path / "nope.csv"),
            "--trials", str(trials), "--lag", "1",
            "--out", str(tmp_path / "f.csv"),
        )
        assert code == 1

    def test_short_window_skipped_with_warning(self, workspace, tmp_path, capsys):
        root, rec, trials = workspace
        short = tmp_path / "short.csv"
        short.write_text(
            TRIALS_HEADER + "\nok,chaos,0,1000,1\ntiny,chaos,0,40,1\n"
        )
        code = run(
            "extract", "--recording", str(rec), "--trials", str(short),
            "--lag", "1", "--out", str(tmp_path / "f.csv"),
        )
        assert code == 0
        err = capsys.readouterr().err
        assert "skipped trial tiny" in err
        assert "extracted 1 of 2 trials" in err
        vectors = read_features(tmp_path / "f.csv")
        assert [v.trial_id for v in vectors] == ["ok"]


class TestTrainEval:
    @pytest.mark.parametrize("kind", ["mlp", "km-svm"])
    def test_round_trip(self, features_file, tmp_path, kind):
        model = tmp_path / "model.json"
        extra = ["--k-per-class", "2"] if kind == "km-svm" else []
        assert run(
            "train", "--features", str(features_file), "--model", kind,
            "--seed", "0", *extra, "--out", str(model),
        ) == 0
        doc = json.loads(model.read_text())
        assert doc["kind"] == kind
        assert doc["scaler"] is not None
        report = tmp_path / "report.json"
        assert run(
            "eval", "--features", str(features_file), "--model", str(model),
            "--out", str(report),
        ) == 0
        rep = read_report(report)
        # six trials from cleanly separated dynamics: training set accuracy
        assert rep["accuracy"] == 1.0
        assert rep["n_test"] == 6
        assert rep["config"]["model_kind"] == kind
        assert rep["config"]["model_config"]["model"] == kind

    def test_single_class_exits_2(self, workspace, features_file, tmp_path, capsys):
        vectors = [v for v in read_features(features_file) if v.label == 1]
        from chaoseeg.io import write_features

        solo = tmp_path / "solo.csv"
        write_features(solo, vectors)
        code = run(
            "train", "--features", str(solo), "--model", "mlp",
            "--out", str(tmp_path / "m.json"),
        )
        assert code == 2
        assert "both classes" in capsys.readouterr().err

    def test_malformed_features_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text(FEATURES_HEADER + "\nt1,1,0.1,0.2\n")
        code = run(
            "train", "--features", str(bad), "--model", "mlp",
            "--out", str(tmp_path / "m.json"),
        )
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    def test_no_scaling_option(self, features_file, tmp_path):
        model = tmp_path / "model.json"
        assert run(
            "train", "--features", str(features_file), "--model", "mlp",
            "--scale", "none", "--out", str(model),
        ) == 0
        assert json.loads(model.read_text())["scaler"] is None

    def test_deterministic_model_bytes(self, features_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run(
                "train", "--features", str(features_file), "--model", "km-svm",
                "--k-per-class", "2", "--seed", "1", "--out", str(out),
            ) == 0
        assert a.read_bytes() == b.read_bytes()


class TestHist:
    def test_histogram_file(self, features_file, tmp_path):
        out = tmp_path / "hist.csv"
        assert run(
            "hist", "--features", str(features_file), "--index", "mi",
            "--bins", "5", "--out", str(out),
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == HISTOGRAM_HEADER
        assert len(lines) == 6

    def test_unknown_index_exits_2(self, features_file, tmp_path):
        assert run(
            "hist", "--features", str(features_file), "--index", "slope",
            "--out", str(tmp_path / "h.csv"),
        ) == 2


class TestSummary:
    def test_to_stdout(self, features_file, capsys):
        assert run("summary", "--features", str(features_file)) == 0
        out = capsys.readouterr().out
        assert "class +1" in out and "class -1" in out
        assert "lle" in out

    def test_to_file_matches_stdout(self, features_file, tmp_path, capsys):
        assert run("summary", "--features", str(features_file)) == 0
        stdout_text = capsys.readouterr().out
        out = tmp_path / "summary.txt"
        assert run("summary", "--features", str(features_file), "--out", str(out)) == 0
        assert out.read_text() == stdout_text


class TestPipelineDeterminism:
    def test_extract_rerun_byte_identical(self, workspace, features_file, tmp_path):
        root, rec, trials = workspace
        again = tmp_path / "again.csv"
        assert run(
            "extract", "--recording", str(rec), "--trials", str(trials),
            "--lag", "1", "--out", str(again),
        ) == 0
        assert again.read_bytes() == features_file.read_bytes()
