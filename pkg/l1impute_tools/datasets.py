import logging
import os
import re
import tempfile
from typing import List, Optional

import pandas as pd
import requests

from l1impute.errors import DataError


_LOGGER = logging.getLogger("l1impute_tools.datasets")

BEER_URL_ENV_VAR = "L1IMPUTE_BEER_URL"
DEFAULT_BEER_URL = (
    "https://raw.githubusercontent.com/jbrownlee/Datasets/master/"
    "monthly-beer-production-in-austr.csv"
)


def _cache_dir(override: Optional[str] = None) -> str:
    if override:
        os.makedirs(override, exist_ok=True)
        return override
    cache_dir = os.path.join(os.path.expanduser("~"), ".cache", "l1impute")
    try:
        os.makedirs(cache_dir, exist_ok=True)
    except OSError:
        cache_dir = os.path.join(tempfile.gettempdir(), "l1impute-cache")
        os.makedirs(cache_dir, exist_ok=True)
    return cache_dir


def _cache_name(url: str) -> str:
    base = os.path.basename(url.split("?", 1)[0]) or "dataset.csv"
    return re.sub(r"[^A-Za-z0-9._-]", "_", base)


def download(url: str, cache_dir: Optional[str] = None, timeout_seconds: int = 30) -> str:
    path = os.path.join(_cache_dir(cache_dir), _cache_name(url))
    if os.path.exists(path) and os.path.getsize(path) > 0:
        _LOGGER.info("Dataset cache hit. path=%s", path)
        return path
    try:
        response = requests.get(url, timeout=timeout_seconds, allow_redirects=True)
        response.raise_for_status()
    except requests.exceptions.Timeout:
        raise DataError(f"dataset download timed out: {url}")
    except requests.exceptions.ConnectionError:
        raise DataError(f"failed to connect while downloading {url}")
    except requests.exceptions.HTTPError as exc:
        raise DataError(f"dataset download returned HTTP {exc.response.status_code}: {url}")
    partial = path + ".part"
    with open(partial, "wb") as handle:
        handle.write(response.content)
    os.replace(partial, path)
    _LOGGER.info("Dataset downloaded. url=%s bytes=%s path=%s", url, len(response.content), path)
    return path


def load_numeric_column(path: str) -> List[float]:
    """Last column of a CSV as floats, dropping rows that are not numeric (headers, footers)."""
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot parse dataset {path} ({exc})")
    values = pd.to_numeric(frame.iloc[:, -1].str.strip(), errors="coerce").dropna()
    if values.empty:
        raise DataError(f"no numeric values in dataset {path}")
    return [float(v) for v in values]


def fetch_beer(limit: int = 300, cache_dir: Optional[str] = None, url: Optional[str] = None) -> List[float]:
    """Australian monthly beer production, first ``limit`` records."""
    source = url or os.environ.get(BEER_URL_ENV_VAR, "").strip() or DEFAULT_BEER_URL
    values = load_numeric_column(download(source, cache_dir=cache_dir))
    if limit and len(values) < limit:
        raise DataError(f"dataset has {len(values)} records, fewer than the {limit} requested")
    return values[:limit] if limit else values
