import numpy as np
import pytest

from prosodymt import (
    LayerId,
    LayerSide,
    ProbeConfig,
    Split,
    emit_sweep,
    eval_probe,
    layer_sweep,
    synth_hsf,
    train_probe,
)
from prosodymt.errors import DataError
from prosodymt.hsf import HsfHeader, Pooling, ProbeDataset
from prosodymt.probe import initial_weights, logistic_grad, logistic_loss, split_indices


class TestSplitIndices:
    def test_225_items_gives_180_45(self):
        train, test = split_indices(225, ProbeConfig())
        assert len(train) == 180 and len(test) == 45

    def test_depends_only_on_inputs(self):
        a = split_indices(100, ProbeConfig(seed=4))
        b = split_indices(100, ProbeConfig(seed=4))
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        c = split_indices(100, ProbeConfig(seed=5))
        assert not np.array_equal(a[0], c[0])

    def test_partition(self):
        train, test = split_indices(57, ProbeConfig(seed=1))
        assert sorted(np.concatenate([train, test]).tolist()) == list(range(57))


class TestInitialization:
    def test_prefix_coincides_across_dims(self):
        small = initial_weights(512)
        large = initial_weights(1024)
        assert np.array_equal(small, large[:512])

    def test_identical_across_calls(self):
        assert np.array_equal(initial_weights(64), initial_weights(64))


class TestTrainProbe:
    def test_zero_epochs_equals_init(self):
        ds = synth_hsf(50, (1, 1), 8, 2.0, seed=0)
        probe = train_probe(ds, LayerId(LayerSide.ENC, 1), ProbeConfig(epochs=0))
        assert np.array_equal(probe.weights, initial_weights(8))
        assert probe.bias == 0.0

    def test_loss_non_increasing(self):
        ds = synth_hsf(80, (1, 1), 8, 1.0, seed=2)
        cfg = ProbeConfig(lr=0.05, epochs=0, seed=3)
        layer = LayerId(LayerSide.ENC, 1)
        train_idx, _ = split_indices(80, cfg)
        X = ds.vectors[:, 0, :].astype(np.float64)[train_idx]
        y = ds.labels.astype(np.float64)[train_idx]
        losses = []
        for epochs in range(0, 60, 10):
            probe = train_probe(ds, layer, ProbeConfig(lr=0.05, epochs=epochs, seed=3))
            losses.append(logistic_loss(probe.weights, probe.bias, X, y))
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))

    def test_single_class_split_errors(self):
        header = HsfHeader("x", 1, 1, 4, 10, Pooling.MEAN)
        labels = np.zeros(10, dtype=np.uint8)
        vectors = np.zeros((10, 2, 4), dtype=np.float32)
        ds = ProbeDataset(header, labels, vectors)
        with pytest.raises(DataError, match="single-class"):
            train_probe(ds, LayerId(LayerSide.ENC, 1))

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(12)
        X = rng.standard_normal((20, 5))
        y = rng.integers(0, 2, 20).astype(np.float64)
        w = rng.standard_normal(5) * 0.5
        b = 0.3
        grad_w, grad_b = logistic_grad(w, b, X, y, l2=0.01)
        h = 1e-6
        for i in range(5):
            delta = np.zeros(5)
            delta[i] = h
            numeric = (logistic_loss(w + delta, b, X, y, 0.01) - logistic_loss(w - delta, b, X, y, 0.01)) / (2 * h)
            assert abs(numeric - grad_w[i]) <= 1e-5 * max(1.0, abs(numeric))
        numeric_b = (logistic_loss(w, b + h, X, y, 0.01) - logistic_loss(w, b - h, X, y, 0.01)) / (2 * h)
        assert abs(numeric_b - grad_b) <= 1e-5 * max(1.0, abs(numeric_b))


class TestEvalProbe:
    def test_perfect_on_separable(self):
        ds = synth_hsf(200, (1, 1), 16, 10.0, seed=0)
        layer = LayerId(LayerSide.ENC, 1)
        probe = train_probe(ds, layer)
        assert eval_probe(probe, ds, layer) >= 0.98

    def test_label_flip_symmetry(self):
        ds = synth_hsf(100, (1, 1), 8, 4.0, seed=5)
        layer = LayerId(LayerSide.DEC, 1)
        probe = train_probe(ds, layer)
        acc = eval_probe(probe, ds, layer)
        flipped = type(probe)(-probe.weights, -probe.bias, layer)
        # sign(z) ties break toward class 0, so allow the boundary items
        assert eval_probe(flipped, ds, layer) == pytest.approx(1.0 - acc, abs=0.05)

    def test_dimension_mismatch(self):
        ds = synth_hsf(40, (1, 1), 8, 1.0, seed=0)
        layer = LayerId(LayerSide.ENC, 1)
        probe = train_probe(ds, layer)
        other = synth_hsf(40, (1, 1), 16, 1.0, seed=0)
        with pytest.raises(DataError, match="dimension"):
            eval_probe(probe, other, LayerId(LayerSide.ENC, 1))

    def test_train_split_eval(self):
        ds = synth_hsf(60, (1, 1), 8, 6.0, seed=1)
        layer = LayerId(LayerSide.ENC, 1)
        probe = train_probe(ds, layer)
        assert eval_probe(probe, ds, layer, Split.TRAIN) >= 0.98


class TestLayerSweep:
    def test_24_layer_rows(self):
        ds = synth_hsf(40, (12, 12), 4, 5.0, seed=0)
        result = layer_sweep(ds, ProbeConfig(epochs=30))
        assert len(result.rows) == 24
        sides = [(r.side, r.index) for r in result.rows]
        assert sides[:12] == [(LayerSide.ENC, i) for i in range(1, 13)]
        assert sides[12:] == [(LayerSide.DEC, i) for i in range(1, 13)]

    def test_12_layer_rows(self):
        ds = synth_hsf(40, (6, 6), 4, 5.0, seed=0)
        assert len(layer_sweep(ds, ProbeConfig(epochs=20)).rows) == 12

    def test_constant_vectors_give_majority_rate(self):
        # A constant layer carries no signal: the probe converges to the
        # training-majority class, so test accuracy is that class's test rate.
        header = HsfHeader("const", 1, 1, 4, 40, Pooling.MEAN)
        labels = np.array([0] * 25 + [1] * 15, dtype=np.uint8)
        vectors = np.ones((40, 2, 4), dtype=np.float32)
        ds = ProbeDataset(header, labels, vectors)
        cfg = ProbeConfig(epochs=300, seed=2)
        result = layer_sweep(ds, cfg)
        train_idx, test_idx = split_indices(40, cfg)
        train_majority = int(labels[train_idx].mean() > 0.5)
        expected = (labels[test_idx] == train_majority).mean()
        for row in result.rows:
            assert row.test_acc == pytest.approx(expected)

    def test_means_are_recomputable(self):
        ds = synth_hsf(40, (2, 3), 4, 3.0, seed=0)
        result = layer_sweep(ds, ProbeConfig(epochs=25))
        enc = [r.test_acc for r in result.rows if r.side is LayerSide.ENC]
        dec = [r.test_acc for r in result.rows if r.side is LayerSide.DEC]
        assert result.mean_enc_acc == pytest.approx(sum(enc) / len(enc))
        assert result.mean_dec_acc == pytest.approx(sum(dec) / len(dec))

    def test_reproducible(self):
        ds = synth_hsf(40, (2, 2), 4, 2.0, seed=9)
        a = layer_sweep(ds, ProbeConfig(epochs=40, seed=1))
        b = layer_sweep(ds, ProbeConfig(epochs=40, seed=1))
        assert a == b


class TestEmitSweep:
    def test_csv_shape(self, tmp_path):
        ds = synth_hsf(40, (2, 2), 4, 5.0, seed=0)
        result = layer_sweep(ds, ProbeConfig(epochs=20))
        path = tmp_path / "sweep.csv"
        emit_sweep(result, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "side,layer,test_acc"
        assert len(lines) == 1 + 4 + 2  # header + layers + two mean rows
        assert lines[-2].startswith("enc,mean,")
        assert lines[-1].startswith("dec,mean,")

    def test_empty_result_header_only(self, tmp_path):
        from prosodymt.probe import LayerSweepResult

        path = tmp_path / "empty.csv"
        emit_sweep(LayerSweepResult((), 0.0, 0.0), path)
        assert path.read_text() == "side,layer,test_acc\n"

    def test_mean_rows_equal_recomputed(self, tmp_path):
        ds = synth_hsf(40, (2, 2), 4, 5.0, seed=0)
        result = layer_sweep(ds, ProbeConfig(epochs=20))
        path = tmp_path / "sweep.csv"
        emit_sweep(result, path)
        lines = path.read_text().strip().split("\n")
        rows = [l.split(",") for l in lines[1:5]]
        enc_mean = sum(float(r[2]) for r in rows if r[0] == "enc") / 2
        emitted = float([l for l in lines if l.startswith("enc,mean,")][0].split(",")[2])
        assert emitted == pytest.approx(enc_mean, abs=1e-6)
