import logging
import math

import numpy as np
import pytest

from l1impute.errors import DataError, ParameterError
from l1impute.mask import (
    Mask,
    SplitMix64,
    generic_mask,
    load_mask,
    mask_from_missing_values,
    mask_from_text,
    mask_to_text,
    random_size_limit,
    save_mask,
    uniform_mask,
)


def test_splitmix64_reference_values():
    # First outputs for seed 0 as published with the reference C implementation.
    gen = SplitMix64(0)
    assert gen.next_uint64() == 0xE220A8397B1DCDAF
    assert gen.next_uint64() == 0x6E789E6AA1B965F4
    assert gen.next_uint64() == 0x06C45D188009454F


def test_vectorized_stream_matches_scalar_stream():
    scalar = SplitMix64(12345)
    vector = SplitMix64(12345)
    expected = [scalar.next_uint64() for _ in range(40)]
    got = [int(v) for v in vector.uint64s(25)] + [int(v) for v in vector.uint64s(15)]
    assert got == expected
    assert vector.next_uint64() == scalar.next_uint64()


def test_floats_lie_in_unit_interval():
    values = SplitMix64(7).floats(10000)
    assert values.min() >= 0.0 and values.max() < 1.0
    assert abs(values.mean() - 0.5) < 0.02


def test_next_below_stays_in_range():
    gen = SplitMix64(99)
    draws = [gen.next_below(7) for _ in range(2000)]
    assert set(draws) == set(range(7))


def test_mask_validation():
    with pytest.raises(ParameterError):
        Mask(5, (3, 1))
    with pytest.raises(ParameterError):
        Mask(5, (1, 5))
    with pytest.raises(ParameterError):
        Mask.from_indices(5, [1, 1])
    mask = Mask.from_indices(6, [4, 0, 2])
    assert mask.indices == (0, 2, 4)
    assert mask.complement() == (1, 3, 5)
    assert 2 in mask and 3 not in mask
    assert mask.boolean().tolist() == [True, False, True, False, True, False]


def test_mask_membership_matches_indices():
    mask = generic_mask(500, 0.3, 11)
    members = set(mask.indices)
    assert [i for i in range(-2, 503) if i in mask] == sorted(members)
    assert np.int64(mask.indices[0]) in mask
    assert Mask.empty(4).__contains__(0) is False
    assert "1" not in mask
    assert 1.5 not in mask


def test_generic_mask_is_deterministic():
    assert generic_mask(100, 0.3, 1) == generic_mask(100, 0.3, 1)
    assert generic_mask(100, 0.3, 1) != generic_mask(100, 0.3, 2)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_generic_mask_rejects_bad_probability(p):
    with pytest.raises(ParameterError):
        generic_mask(10, p, 0)


def test_generic_mask_rejects_single_point():
    with pytest.raises(ParameterError):
        generic_mask(1, 0.5, 0)


def test_generic_mask_redraws_degenerate_results():
    masks = [generic_mask(10, 0.001, seed) for seed in range(200)]
    assert all(0 < m.size < 10 for m in masks)
    assert any(m.redraws > 0 for m in masks)


def test_generic_mask_mean_size():
    n, p, draws = 200, 0.3, 10000
    sizes = np.array([generic_mask(n, p, seed).size for seed in range(draws)])
    stderr = math.sqrt(n * p * (1 - p) / draws)
    assert abs(sizes.mean() - n * p) <= 3 * stderr


def test_generic_mask_warns_above_size_limit(caplog):
    with caplog.at_level(logging.WARNING, logger="l1impute.mask"):
        generic_mask(100, 0.9, 0, gamma0=1.0)
    assert "exceeds" in caplog.text


def test_random_size_limit():
    assert random_size_limit(512, 1.0) == pytest.approx(512 / math.log(512))


def test_uniform_mask_size_and_determinism():
    mask = uniform_mask(50, 10, 4)
    assert mask.size == 10
    assert mask == uniform_mask(50, 10, 4)


@pytest.mark.parametrize("size", [0, 5, 6])
def test_uniform_mask_rejects_bad_size(size):
    with pytest.raises(ParameterError):
        uniform_mask(5, size, 0)


@pytest.mark.slow
def test_uniform_mask_is_uniform():
    counts = np.zeros(100)
    seeds = 20000
    for seed in range(seeds):
        counts[uniform_mask(100, 10, seed).array()] += 1
    assert np.all(np.abs(counts / seeds - 0.1) <= 0.01)


def test_mask_from_missing_values():
    signal, mask = mask_from_missing_values([1.0, None, 3.0])
    assert mask.indices == (1,)
    assert signal.values.tolist() == [1, 0, 3]

    _, mask = mask_from_missing_values([1.0, float("nan"), 2.0])
    assert mask.indices == (1,)

    _, mask = mask_from_missing_values([1.0, 2.0])
    assert mask.size == 0


def test_mask_from_missing_values_rejects_all_missing():
    with pytest.raises(DataError):
        mask_from_missing_values([None, None])


def test_mask_text_format(tmp_path):
    mask = Mask(8, (1, 4, 7))
    assert mask_to_text(mask) == "# n=8\n1\n4\n7\n"
    assert mask_from_text(mask_to_text(mask)) == mask
    path = tmp_path / "m.txt"
    save_mask(str(path), mask)
    assert load_mask(str(path)) == mask


@pytest.mark.parametrize("text", ["", "1\n2\n", "# n=4\nx\n", "# n=4\n5\n"])
def test_mask_text_rejects_malformed(text):
    with pytest.raises(DataError):
        mask_from_text(text)
