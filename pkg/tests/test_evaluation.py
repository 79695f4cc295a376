import numpy as np
import pytest

from l1impute.errors import DataError, ParameterError
from l1impute.evaluation import (
    empirical_mean_gap,
    error_diff_series,
    evaluate,
    mae,
    mae_weighted,
    report_to_dict,
)
from l1impute.mask import Mask
from l1impute.spectral import Signal


def test_mae_examples():
    truth = Signal.time([1.0, 2.0, 3.0, 4.0])
    assert mae(truth, truth, Mask(4, (1, 2))) == 0.0
    assert mae(truth, Signal.time([1.0, 4.0, 3.0, 4.0]), Mask(4, (1,))) == pytest.approx(2.0)
    assert mae(truth, Signal.time([1.0, 3.0, 6.0, 4.0]), Mask(4, (1, 2))) == pytest.approx(2.0)
    with pytest.raises(ParameterError):
        mae(truth, truth, Mask.empty(4))


def test_mae_weighted_examples():
    truth = Signal.time([0.0, 2.0])
    assert mae_weighted(truth, Signal.time([0.0, 1.0]), Mask(2, (1,))) == pytest.approx(0.5)
    assert mae_weighted(truth, truth, Mask(2, (1,))) == 0.0
    with pytest.raises(DataError):
        mae_weighted(truth, truth, Mask(2, (0,)))


def test_mae_weighted_is_scale_free(rng):
    truth = Signal.time(rng.standard_normal(20))
    imputed = Signal.time(rng.standard_normal(20))
    mask = Mask(20, (1, 4, 9, 15))
    assert mae_weighted(truth * 3.7, imputed * 3.7, mask) == pytest.approx(mae_weighted(truth, imputed, mask))


def test_error_diff_series(rng):
    truth = Signal.time(rng.standard_normal(12))
    g1 = Signal.time(rng.standard_normal(12))
    g2 = Signal.time(rng.standard_normal(12))
    mask = Mask(12, (0, 3, 5, 11))
    assert error_diff_series(truth, g1, g1, mask) == [0.0] * 4
    assert all(v >= 0 for v in error_diff_series(truth, g1, truth, mask))
    diff = error_diff_series(truth, g1, g2, mask)
    assert np.mean(diff) == pytest.approx(mae(truth, g1, mask) - mae(truth, g2, mask), abs=1e-12)
    with pytest.raises(ParameterError):
        error_diff_series(truth, g1, Signal.time([1.0]), mask)


def test_empirical_mean_gap():
    assert empirical_mean_gap(Signal.time([0.0, 0.0, 0.0, 4.0]), Mask(4, (3,))) == pytest.approx(3.0)
    assert empirical_mean_gap(Signal.time([2.0, -2.0, 2.0]), Mask(3, (1,))) == pytest.approx(0.0)
    assert empirical_mean_gap(Signal.time([1.0, 5.0]), Mask(2, (0, 1))) == pytest.approx(0.0)
    with pytest.raises(ParameterError):
        empirical_mean_gap(Signal.time([1.0, 5.0]), Mask.empty(2))


def test_evaluate_with_baseline():
    truth = Signal.time([1.0, 2.0, 3.0, 4.0])
    imputed = Signal.time([1.0, 2.5, 3.0, 4.0])
    baseline = Signal.time([1.0, 3.0, 3.0, 4.0])
    report = evaluate(truth, imputed, Mask(4, (1,)), baseline=baseline)
    assert report.mae == pytest.approx(0.5)
    assert report.mae_baseline == pytest.approx(1.0)
    assert report.mae_ratio == pytest.approx(0.5)
    assert report.error_diff == [pytest.approx(0.5)]
    assert report.mean_abs_f == pytest.approx(2.5)
    flat = report_to_dict(report)
    assert set(flat) == {
        "mae",
        "mae_weighted",
        "mean_abs_h_on_m",
        "mean_abs_f",
        "mae_baseline",
        "mae_ratio",
        "error_diff",
    }


def test_evaluate_keeps_undefined_weighted_error_empty():
    truth = Signal.time([0.0, 1.0])
    report = evaluate(truth, Signal.time([0.5, 1.0]), Mask(2, (0,)))
    assert report.mae_weighted is None
    assert report.mae_ratio is None
