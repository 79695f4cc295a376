from .bench import BenchResult, run_bench, write_outputs
from .cli import main
from .datasets import fetch_beer
from .series_io import SeriesData, read_series, write_imputed

__all__ = [
    "BenchResult",
    "SeriesData",
    "fetch_beer",
    "main",
    "read_series",
    "run_bench",
    "write_imputed",
    "write_outputs",
]
