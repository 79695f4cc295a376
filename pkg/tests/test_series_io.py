import json

import numpy as np
import pytest

from l1impute.errors import DataError
from l1impute.mask import Mask
from l1impute.spectral import Signal
from l1impute_tools.series_io import complete_signal, read_series, take, write_imputed, write_json


def test_single_column_with_missing_cells(series_csv):
    data = read_series(str(series_csv([1.0, None, 3.0, None, 5.0])))
    assert data.values == [1.0, None, 3.0, None, 5.0]
    assert data.header is None
    assert not data.complete


def test_header_and_label_column(series_csv):
    path = series_csv([10.0, None, 12.5], header="Month,Production", labels=["1956-01", "1956-02", "1956-03"])
    data = read_series(str(path))
    assert data.header == ["Month", "Production"]
    assert data.labels == ["1956-01", "1956-02", "1956-03"]
    assert data.values == [10.0, None, 12.5]


def test_nan_spellings_and_trailing_missing(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("1.5\nNaN\nnan\n2\nNAN\n\n\n", encoding="utf-8")
    assert read_series(str(path)).values == [1.5, None, None, 2.0, None]


@pytest.mark.parametrize(
    "text",
    ["1,2\n3,4\n", "1\nabc\n", "a,b,c\n1,2,3\n", "value\n", "1\ninf\n"],
)
def test_malformed_input_is_a_data_error(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(DataError):
        read_series(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(DataError):
        read_series(str(tmp_path / "nope.csv"))


def test_write_imputed_format(tmp_path):
    path = tmp_path / "out" / "g.csv"
    write_imputed(str(path), Signal.time([1.0, 0.1, 3.0]), Mask(3, (1,)))
    assert path.read_bytes() == b"index,value,imputed_flag\n0,1,0\n1,0.10000000000000001,1\n2,3,0\n"


def test_json_output_is_sorted_and_null_safe(tmp_path):
    path = tmp_path / "r.json"
    write_json(str(path), {"b": np.float64(1.5), "a": float("nan"), "c": np.bool_(True), "d": (1, 2)})
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert json.loads(text) == {"a": None, "b": 1.5, "c": True, "d": [1, 2]}
    assert text.index('"a"') < text.index('"b"')


def test_complete_signal_and_take(series_csv):
    data = read_series(str(series_csv([1.0, 2.0, 3.0])))
    assert complete_signal(data).values.real.tolist() == [1.0, 2.0, 3.0]
    with pytest.raises(DataError):
        complete_signal(read_series(str(series_csv([1.0, None, 3.0], name="gap.csv"))))
    assert take([1, 2, 3], 2) == [1, 2]
    assert take([1, 2, 3], None) == [1, 2, 3]
