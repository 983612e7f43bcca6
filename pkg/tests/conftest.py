import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from besovlab.lp import Field, make_grid  # noqa: E402


def band_limited(grid, seed, k_hi=None, k_lo=0.0):
    """Random real field with all modes inside ``k_lo <= |k| <= k_hi``."""
    rng = np.random.default_rng(seed)
    k_hi = grid.k_max / 3 if k_hi is None else k_hi
    mask = (grid.kmag >= k_lo) & (grid.kmag <= k_hi)
    spec = (rng.standard_normal(grid.spectral_shape)
            + 1j * rng.standard_normal(grid.spectral_shape)) * mask
    return Field(grid, values=np.fft.irfftn(spec, s=grid.shape, axes=tuple(range(grid.dim))))


@pytest.fixture(scope="session")
def grid1d():
    return make_grid(1, 64)


@pytest.fixture(scope="session")
def grid2d():
    return make_grid(2, 32)


@pytest.fixture(scope="session")
def grid3d():
    return make_grid(3, 16)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
