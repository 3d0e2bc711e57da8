import math

import numpy as np
import pytest

from beta4ucs.data import Dataset, Normalizer, fit_transform, load_csv, split


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_basic(self, tmp_path):
        ds = load_csv(write(tmp_path, "0.1,a\n0.2,b\n"))
        assert ds.n_instances == 2 and ds.n_dims == 1
        assert ds.class_names == ["a", "b"]
        assert list(ds.labels) == [0, 1]

    def test_first_appearance_class_order(self, tmp_path):
        ds = load_csv(write(tmp_path, "1,z\n2,a\n3,z\n"))
        assert ds.class_names == ["z", "a"]
        assert list(ds.labels) == [0, 1, 0]

    def test_missing_markers(self, tmp_path):
        ds = load_csv(write(tmp_path, "?,2,a\n1,,b\n"))
        assert math.isnan(ds.features[0, 0])
        assert math.isnan(ds.features[1, 1])

    def test_empty_file(self, tmp_path):
        with pytest.raises(ValueError):
            load_csv(write(tmp_path, ""))

    def test_unparseable_cell_reports_line(self, tmp_path):
        with pytest.raises(ValueError, match=":2:"):
            load_csv(write(tmp_path, "1,a\nxyz,b\n"))

    def test_inconsistent_columns(self, tmp_path):
        with pytest.raises(ValueError, match="columns"):
            load_csv(write(tmp_path, "1,2,a\n1,b\n"))

    def test_label_col_override(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,1,2\nb,3,4\n"), label_col=0)
        assert ds.class_names == ["a", "b"]
        assert ds.features[1].tolist() == [3.0, 4.0]

    def test_header_row(self, tmp_path):
        ds = load_csv(write(tmp_path, "f1,f2,cls\n1,2,a\n"), header=True)
        assert ds.attribute_names == ["f1", "f2"]


class TestNormalizer:
    def test_min_max_mapping(self):
        n = Normalizer.fit(np.array([[2.0], [4.0]]))
        assert n.transform(np.array([[3.0]]))[0, 0] == pytest.approx(0.5)

    def test_test_values_clipped(self):
        n = Normalizer.fit(np.array([[2.0], [4.0]]))
        assert n.transform(np.array([[5.0]]), clip=True)[0, 0] == 1.0

    def test_constant_attribute_maps_to_half(self):
        n = Normalizer.fit(np.array([[3.0], [3.0]]))
        assert n.transform(np.array([[3.0]]))[0, 0] == 0.5
        assert n.transform(np.array([[7.0]]))[0, 0] == 0.5

    def test_missing_stays_missing(self):
        n = Normalizer.fit(np.array([[2.0], [4.0]]))
        out = n.transform(np.array([[np.nan]]))
        assert math.isnan(out[0, 0])

    def test_idempotent_on_unit_range(self):
        feats = np.array([[0.0], [0.25], [1.0]])
        n = Normalizer.fit(feats)
        assert np.allclose(n.transform(feats), feats)

    def test_fit_transform_fits_on_train_only(self):
        train = Dataset(np.array([[0.0], [10.0]]), np.array([0, 1]))
        test = Dataset(np.array([[20.0]]), np.array([0]))
        tr, te, norm = fit_transform(train, test)
        assert te.features[0, 0] == 1.0
        assert tr.features[1, 0] == 1.0

    def test_inverse_round_trip(self):
        n = Normalizer.fit(np.array([[2.0, -1.0], [4.0, 3.0]]))
        vals = np.array([[0.25, 0.75]])
        assert np.allclose(n.transform(n.inverse(vals)), vals)


def toy_dataset(n=100, classes=2, seed=0):
    rng = np.random.default_rng(seed)
    return Dataset(rng.random((n, 3)), rng.integers(classes, size=n),
                   class_names=[str(c) for c in range(classes)])


class TestSplit:
    def test_shuffle_sizes(self):
        tr, te = split(toy_dataset(), "shuffle", 0, ratio=0.9)[0]
        assert tr.n_instances == 90 and te.n_instances == 10

    def test_shuffle_deterministic(self):
        a = split(toy_dataset(), "shuffle", 5)[0]
        b = split(toy_dataset(), "shuffle", 5)[0]
        assert np.array_equal(a[0].features, b[0].features)
        assert np.array_equal(a[1].labels, b[1].labels)

    def test_different_seeds_differ(self):
        a = split(toy_dataset(), "shuffle", 1)[0][1]
        b = split(toy_dataset(), "shuffle", 2)[0][1]
        assert not np.array_equal(a.features, b.features)

    def test_kfold_partition(self):
        ds = toy_dataset()
        folds = split(ds, "kfold", 3, k=10)
        assert len(folds) == 10
        seen = np.concatenate([te.features[:, 0] for _, te in folds])
        assert len(seen) == 100
        assert set(np.round(seen, 12)) == set(np.round(ds.features[:, 0], 12))
        for tr, te in folds:
            assert tr.n_instances + te.n_instances == 100
            assert not set(map(tuple, tr.features)) & set(map(tuple, te.features))

    def test_stratified_preserves_proportions(self):
        labels = np.array([0] * 50 + [1] * 50)
        ds = Dataset(np.random.default_rng(0).random((100, 2)), labels)
        tr, te = split(ds, "stratified_shuffle", 4, ratio=0.9)[0]
        assert abs((tr.labels == 0).sum() - 45) <= 1
        assert abs((te.labels == 0).sum() - 5) <= 1

    def test_stratified_rejects_tiny_class(self):
        ds = Dataset(np.zeros((3, 1)), np.array([0, 0, 1]),
                     class_names=["0", "1"])
        with pytest.raises(ValueError):
            split(ds, "stratified_shuffle", 0)

    def test_unknown_protocol(self):
        with pytest.raises(ValueError):
            split(toy_dataset(), "bootstrap", 0)
