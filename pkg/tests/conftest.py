import numpy as np
import pytest

from l1impute.spectral import Signal, idft


def _sparse_spectrum_signal(rng, n, support_size, noise=0.0):
    support = rng.choice(n, size=support_size, replace=False)
    spectrum = noise * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    spectrum[support] = rng.standard_normal(support_size) + 1j * rng.standard_normal(support_size)
    return idft(Signal.frequency(spectrum)), tuple(sorted(int(i) for i in support))


def _observed(f, mask):
    values = np.array(f.values)
    values[mask.array()] = 0.0
    return Signal(values, f.domain)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def sparse_signal():
    """Time-domain signal whose spectrum sits on a random support, plus optional spread noise."""
    return _sparse_spectrum_signal


@pytest.fixture
def observed():
    """Copy of a signal with the masked entries zeroed, as the solver sees it."""
    return _observed


@pytest.fixture
def series_csv(tmp_path):
    def _write(values, name="series.csv", header=None, labels=None):
        lines = [header] if header else []
        last = len(values) - 1
        for i, v in enumerate(values):
            # A blank final line is dropped as trailing whitespace, so spell it out.
            cell = ("nan" if i == last else "") if v is None else repr(float(v))
            lines.append(f"{labels[i]},{cell}" if labels else cell)
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
