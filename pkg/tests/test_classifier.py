import math

import numpy as np
import pytest

from conftest import random_dataset
from ndc.classifier import (
    NdcModel,
    compute_centroids,
    empirical_risk,
    load_model,
    predict,
    predict_many,
    predict_scores,
    predict_scores_many,
    save_model,
    training_error,
    with_lambda,
)
from ndc.data import FeaturePartition, LabeledDataset


def test_centroids_toy(toy_ds, toy_partition):
    model = compute_centroids(toy_ds, toy_partition)
    assert model.centroids[0].tolist() == [0.0]
    assert model.centroids[1].tolist() == [6.0]
    assert model.selected_feature_count == 2


def test_centroids_single_sample_per_class():
    ds = LabeledDataset.from_arrays([[1.0, 2.0], [3.0, 4.0]], [1, 2])
    model = compute_centroids(ds, FeaturePartition((np.array([0]), np.array([1]))))
    assert model.centroids[0].tolist() == [1.0]
    assert model.centroids[1].tolist() == [4.0]


def test_centroids_with_special_group_bookkeeping():
    rng = np.random.default_rng(0)
    ds = LabeledDataset.from_arrays(rng.normal(size=(6, 5)), [1, 1, 1, 2, 2, 2])
    part = FeaturePartition(
        (np.array([1, 2, 4]), np.array([0]), np.array([3])), has_special=True)
    model = compute_centroids(ds, part)
    assert [len(c) for c in model.centroids] == [1, 1]
    assert model.selected_feature_count == 2


def test_predict_toy_examples(toy_ds, toy_partition):
    model = compute_centroids(toy_ds, toy_partition)
    assert predict(model, [1.0, 3.0]) == 1          # squared distances 1 vs 9
    assert predict(model, [5.0, 6.1]) == 2          # 25 vs 0.01
    assert predict(model, [2.0, 4.0]) == 1          # exact tie 4 vs 4 -> class 1
    assert predict_scores(model, [1.0, 3.0]).tolist() == [1.0, 9.0]


def test_predict_scores_zero_at_centroids(toy_ds, toy_partition):
    model = compute_centroids(toy_ds, toy_partition)
    x = [0.0, 6.0]  # concatenated centroids in feature order
    assert predict_scores(model, x).tolist() == [0.0, 0.0]


def test_predict_matches_score_argmin():
    rng = np.random.default_rng(5)
    for _ in range(20):
        ds = random_dataset(rng)
        part = _cyclic_partition(ds.p, ds.k)
        model = compute_centroids(ds, part)
        probes = rng.normal(size=(30, ds.p))
        scores = predict_scores_many(model, probes)
        np.testing.assert_array_equal(predict_many(model, probes),
                                      scores.argmin(axis=1) + 1)


def test_scores_invariant_to_within_group_permutation(toy_ds):
    rng = np.random.default_rng(6)
    ds = random_dataset(rng, k=2, p=6, n_per_class=5)
    part = FeaturePartition((np.array([0, 1, 2]), np.array([3, 4, 5])))
    model = compute_centroids(ds, part)
    # permuting coordinates inside a group together with its centroid
    perm = np.array([2, 0, 1])
    part2 = FeaturePartition((np.array([0, 1, 2]), np.array([3, 4, 5])))
    model2 = NdcModel(part2, (model.centroids[0][perm], model.centroids[1]),
                      k=2, p=6)
    x = rng.normal(size=6)
    x2 = x.copy()
    x2[[0, 1, 2]] = x[[0, 1, 2]][perm]
    np.testing.assert_allclose(predict_scores(model, x), predict_scores(model2, x2),
                               rtol=1e-12)


def test_dimension_mismatch_rejected(toy_ds, toy_partition):
    model = compute_centroids(toy_ds, toy_partition)
    with pytest.raises(ValueError, match="expected 2 features"):
        predict(model, [1.0, 2.0, 3.0])


def test_empirical_risk_toy(toy_ds, toy_partition, toy_partition_swapped):
    optimal = compute_centroids(toy_ds, toy_partition)
    assert empirical_risk(toy_ds, optimal) == 0.0
    swapped = compute_centroids(toy_ds, toy_partition_swapped)
    assert empirical_risk(toy_ds, swapped) == 1.0


def test_centroids_minimize_risk_for_fixed_partition():
    rng = np.random.default_rng(7)
    for _ in range(20):
        ds = random_dataset(rng)
        part = _cyclic_partition(ds.p, ds.k)
        model = compute_centroids(ds, part)
        base = empirical_risk(ds, model)
        for _ in range(5):
            perturbed = NdcModel(
                part,
                tuple(c + 1e-3 * rng.normal(size=c.shape) for c in model.centroids),
                k=ds.k, p=ds.p)
            assert empirical_risk(ds, perturbed) >= base


def test_common_scaling_scales_risk_and_keeps_predictions():
    rng = np.random.default_rng(8)
    for scale in (0.5, 3.0, 17.0):
        ds = random_dataset(rng, k=2, p=5, n_per_class=6)
        part = _cyclic_partition(ds.p, ds.k)
        model = compute_centroids(ds, part)
        scaled_ds = LabeledDataset.from_arrays(ds.x * scale, ds.labels)
        scaled_model = compute_centroids(scaled_ds, part)
        assert empirical_risk(scaled_ds, scaled_model) == pytest.approx(
            scale ** 2 * empirical_risk(ds, model), rel=1e-12)
        probes = rng.normal(size=(25, ds.p))
        np.testing.assert_array_equal(predict_many(model, probes),
                                      predict_many(scaled_model, probes * scale))


def test_training_error_toy(toy_ds, toy_partition):
    model = compute_centroids(toy_ds, toy_partition)
    assert training_error(toy_ds, model) == 0.0
    # same distances, labels inverted: swap which class owns each centroid
    inverted = NdcModel(
        FeaturePartition((np.array([1]), np.array([0]))),
        (model.centroids[1], model.centroids[0]),
        k=2, p=2)
    assert training_error(toy_ds, inverted) == 1.0


def test_training_error_single_class():
    ds = LabeledDataset.from_arrays([[1.0], [2.0], [3.0]], [1, 1, 1])
    model = compute_centroids(ds, FeaturePartition((np.array([0]),)))
    assert training_error(ds, model) == 0.0


def test_model_round_trip(tmp_path, toy_ds, toy_partition):
    rng = np.random.default_rng(9)
    ds = random_dataset(rng, k=3, p=7, n_per_class=5)
    part = FeaturePartition(
        (np.array([5]), np.array([0, 3]), np.array([1, 6]), np.array([2, 4])),
        has_special=True)
    model = with_lambda(compute_centroids(ds, part), 0.9)
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    assert back.k == model.k and back.p == model.p
    assert back.lambda_used == 0.9
    assert back.partition.has_special
    probes = rng.normal(size=(40, ds.p))
    np.testing.assert_array_equal(predict_many(model, probes),
                                  predict_many(back, probes))
    for a, b in zip(model.centroids, back.centroids):
        np.testing.assert_array_equal(a, b)


def test_model_json_uses_one_based_indices(tmp_path, toy_ds, toy_partition):
    import json
    model = compute_centroids(toy_ds, toy_partition)
    path = tmp_path / "m.json"
    save_model(model, path)
    doc = json.loads(path.read_text())
    assert doc["format_version"] == 1
    assert doc["partition"] == [[1], [2]]
    assert doc["has_special"] is False
    assert "lambda" not in doc


def test_model_json_inf_lambda(tmp_path, toy_ds, toy_partition):
    model = with_lambda(compute_centroids(toy_ds, toy_partition), math.inf)
    path = tmp_path / "m.json"
    save_model(model, path)
    assert load_model(path).lambda_used is None


def _cyclic_partition(p, k):
    assignment = np.arange(p) % k
    return FeaturePartition(tuple(np.flatnonzero(assignment == j) for j in range(k)))
