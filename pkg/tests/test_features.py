import numpy as np
import pytest

from chaoseeg import (
    ClassBalanceError,
    FeatureMatrix,
    FeatureVector,
    IndexParams,
    SystemSpec,
    TimeSeries,
    WindowSpec,
    build_matrices,
    extract_features,
    generate,
    group_by_class,
    histogram,
    summarize,
)
from chaoseeg.features import trial_sort_key


def vec(tid, label, a, b, c, d):
    return FeatureVector(trial_id=tid, label=label, lle=a, mi=b, med=c, d2=d)


class TestTrialSortKey:
    def test_numeric_before_text_and_numeric_order(self):
        ids = ["10", "2", "b", "a", "1"]
        assert sorted(ids, key=trial_sort_key) == ["1", "2", "10", "a", "b"]


class TestIndexParams:
    def test_defaults(self):
        p = IndexParams()
        assert p.bins == 16
        assert p.lag is None
        assert p.m_max == 8
        assert p.unsaturated == "max"

    @pytest.mark.parametrize(
        "kwargs",
        [{"unsaturated": "drop"}, {"max_lag": 0}, {"lag": 0}],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            IndexParams(**kwargs)


class TestFeatureVector:
    def test_values_order(self):
        v = vec("t", 1, 0.1, 0.2, 3.0, 1.5)
        assert np.array_equal(v.values, [0.1, 0.2, 3.0, 1.5])

    def test_rejects_bad_label(self):
        with pytest.raises(ValueError):
            vec("t", 0, 0.1, 0.2, 3.0, 1.5)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            vec("t", 1, np.nan, 0.2, 3.0, 1.5)


@pytest.fixture(scope="module")
def corpus():
    pos = generate(SystemSpec("logistic", n=3000, transient=100))
    neg = generate(SystemSpec("ar1", n=3000, params={"seed": 2}))
    return pos, neg


class TestExtractFeatures:
    def test_both_classes_extract(self, corpus):
        pos, neg = corpus
        params = IndexParams(lag=1)
        wp = [WindowSpec(i * 1000, (i + 1) * 1000, 1, f"{i}") for i in range(3)]
        wn = [WindowSpec(i * 1000, (i + 1) * 1000, -1, f"{i}") for i in range(3)]
        rp = extract_features(pos, wp, params)
        rn = extract_features(neg, wn, params)
        assert len(rp) == 3 and len(rn) == 3
        assert not rp.skipped and not rn.skipped
        # chaotic map windows show clearly higher stretching rates
        assert min(v.lle for v in rp) > max(v.lle for v in rn)
        for v in rp:
            assert v.label == 1
            assert np.isfinite(v.values).all()

    def test_result_sorted_by_trial_key(self, corpus):
        pos, _ = corpus
        params = IndexParams(lag=1)
        windows = [
            WindowSpec(2000, 3000, 1, "10"),
            WindowSpec(0, 1000, 1, "2"),
            WindowSpec(1000, 2000, 1, "1"),
        ]
        r = extract_features(pos, windows, params)
        assert [v.trial_id for v in r] == ["1", "2", "10"]

    def test_duplicate_ids_rejected(self, corpus):
        pos, _ = corpus
        windows = [WindowSpec(0, 1000, 1, "t"), WindowSpec(1000, 2000, 1, "t")]
        with pytest.raises(ValueError, match="duplicate"):
            extract_features(pos, windows, IndexParams(lag=1))

    def test_failing_window_is_skipped_not_fatal(self, corpus):
        pos, _ = corpus
        windows = [
            WindowSpec(0, 1000, 1, "ok"),
            WindowSpec(1000, 1030, 1, "short"),  # too short to embed at m_max
        ]
        r = extract_features(pos, windows, IndexParams(lag=1))
        assert [v.trial_id for v in r] == ["ok"]
        assert len(r.skipped) == 1
        assert r.skipped[0].trial_id == "short"
        assert r.skipped[0].reason

    def test_out_of_bounds_window_is_skipped(self, corpus):
        pos, _ = corpus
        windows = [WindowSpec(2500, 9000, 1, "far")]
        r = extract_features(pos, windows, IndexParams(lag=1))
        assert not r.vectors
        assert r.skipped[0].trial_id == "far"

    def test_unsaturated_skip_policy(self):
        noise = generate(SystemSpec("white_noise", n=2000, params={"seed": 13}))
        windows = [WindowSpec(0, 2000, -1, "w")]
        keep = extract_features(noise, windows, IndexParams(lag=1, m_max=6))
        assert len(keep) == 1
        assert keep[0].med == 6.0  # policy "max" records the ceiling
        drop = extract_features(
            noise, windows, IndexParams(lag=1, m_max=6, unsaturated="skip")
        )
        assert not drop.vectors
        assert "not saturated" in drop.skipped[0].reason


class TestGrouping:
    def test_group_by_class_sorts(self):
        vs = [
            vec("3", -1, 0.1, 1, 2, 1),
            vec("1", 1, 0.2, 1, 2, 1),
            vec("10", -1, 0.3, 1, 2, 1),
            vec("2", 1, 0.4, 1, 2, 1),
        ]
        groups = group_by_class(vs)
        assert [v.trial_id for v in groups[1]] == ["1", "2"]
        assert [v.trial_id for v in groups[-1]] == ["3", "10"]


class TestFeatureMatrix:
    def make_vectors(self, n=3):
        out = []
        for j in range(n):
            out.append(vec(f"p{j}", 1, 1.0 + j, 2.0, 3.0, 4.0))
            out.append(vec(f"n{j}", -1, -1.0 - j, 0.5, 1.0, 2.0))
        return out

    def test_shape_and_alignment(self):
        m = FeatureMatrix.from_vectors(self.make_vectors())
        assert m.features.shape == (4, 3, 2)
        assert m.n_trials == 3
        assert m.trial_ids[0] == ("p0", "p1", "p2")
        assert m.features[0, 1, 0] == 2.0  # lle of p1
        assert m.features[0, 1, 1] == -2.0  # lle of n1

    def test_imbalance_rejected(self):
        vs = self.make_vectors() + [vec("extra", 1, 0, 0, 0, 0)]
        with pytest.raises(ClassBalanceError, match="imbalance"):
            FeatureMatrix.from_vectors(vs)

    def test_round_trip(self):
        vs = self.make_vectors()
        m = FeatureMatrix.from_vectors(vs)
        back = m.to_vectors()
        assert FeatureMatrix.from_vectors(back).features.tolist() == (
            m.features.tolist()
        )
        assert {v.trial_id for v in back} == {v.trial_id for v in vs}

    def test_to_samples_layout(self):
        m = FeatureMatrix.from_vectors(self.make_vectors())
        x, y = m.to_samples()
        assert x.shape == (6, 4)
        assert y.tolist() == [1, 1, 1, -1, -1, -1]
        assert np.array_equal(x[0], m.features[:, 0, 0])
        assert np.array_equal(x[3], m.features[:, 0, 1])

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            FeatureMatrix(features=np.zeros((3, 2, 2)), trial_ids=((), ()))
        with pytest.raises(ValueError):
            FeatureMatrix(
                features=np.zeros((4, 2, 2)), trial_ids=(("a",), ("b", "c"))
            )

    def test_build_matrices_requires_both_train_classes(self):
        vs = [vec("a", 1, 0, 0, 0, 0), vec("b", 1, 1, 1, 1, 1)]
        with pytest.raises(ClassBalanceError, match="both classes"):
            build_matrices(vs, vs)


class TestSummarize:
    def test_values_against_numpy(self):
        vs = [
            vec("1", 1, 1.0, 10.0, 2.0, 0.5),
            vec("2", 1, 3.0, 12.0, 4.0, 1.5),
            vec("3", -1, 5.0, 1.0, 3.0, 2.0),
            vec("4", -1, 7.0, 3.0, 5.0, 4.0),
        ]
        s = summarize(vs)
        assert s.means[0, 0] == pytest.approx(2.0)
        assert s.stds[0, 0] == pytest.approx(np.std([1.0, 3.0], ddof=1))
        assert s.means[0, 1] == pytest.approx(6.0)
        assert s.counts == (2, 2)
        assert s.degenerate == (False, False)

    def test_single_value_class_degenerate(self):
        vs = [vec("1", 1, 1.0, 1.0, 1.0, 1.0), vec("2", -1, 2.0, 2.0, 2.0, 2.0)]
        s = summarize(vs)
        assert s.degenerate == (True, True)
        assert np.all(s.stds == 0.0)
        assert "std = 0" in s.render()

    def test_render_layout(self):
        s = summarize(
            [vec("1", 1, 0.5, 1.0, 2.0, 1.2), vec("2", -1, 0.1, 0.5, 1.0, 0.8)]
        )
        text = s.render()
        lines = text.splitlines()
        assert lines[0].startswith("index")
        assert "class +1" in lines[0] and "class -1" in lines[0]
        assert lines[2].startswith("lle")
        assert "0.5000 (0.0000)" in lines[2]
        assert text.endswith("\n")

    def test_accepts_matrix(self):
        vs = [vec("1", 1, 0.5, 1.0, 2.0, 1.2), vec("2", -1, 0.1, 0.5, 1.0, 0.8)]
        a = summarize(vs)
        b = summarize(FeatureMatrix.from_vectors(vs))
        assert np.array_equal(a.means, b.means)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


class TestHistogram:
    def test_each_class_sums_to_one(self):
        rng = np.random.default_rng(3)
        vs = [
            vec(f"p{j}", 1, float(rng.random()), 1, 2, 1) for j in range(20)
        ] + [vec(f"n{j}", -1, float(rng.random() + 0.5), 1, 2, 1) for j in range(10)]
        h = histogram(vs, "lle", bins=8)
        assert h.freq_pos.sum() == pytest.approx(1.0)
        assert h.freq_neg.sum() == pytest.approx(1.0)
        assert h.feature == "lle"
        assert len(h.bin_centers) == 8

    def test_pooled_range(self):
        vs = [vec("p", 1, 0.0, 1, 2, 1), vec("n", -1, 10.0, 1, 2, 1)]
        h = histogram(vs, 0, bins=2)
        assert h.bin_centers[0] == pytest.approx(2.5)
        assert h.bin_centers[-1] == pytest.approx(7.5)

    def test_zero_width_range(self):
        vs = [vec("p", 1, 5.0, 1, 2, 1), vec("n", -1, 5.0, 1, 2, 1)]
        h = histogram(vs, "lle", bins=4)
        assert h.bin_centers[0] == pytest.approx(4.5 + 0.125)
        assert h.freq_pos.sum() == pytest.approx(1.0)

    def test_absent_class_zero_column(self):
        vs = [vec("p1", 1, 0.2, 1, 2, 1), vec("p2", 1, 0.8, 1, 2, 1)]
        h = histogram(vs, "lle", bins=4)
        assert h.freq_pos.sum() == pytest.approx(1.0)
        assert np.all(h.freq_neg == 0.0)

    def test_unknown_feature(self):
        vs = [vec("p", 1, 0.2, 1, 2, 1)]
        with pytest.raises(ValueError, match="unknown feature"):
            histogram(vs, "energy", bins=4)
        with pytest.raises(ValueError):
            histogram(vs, "lle", bins=1)
