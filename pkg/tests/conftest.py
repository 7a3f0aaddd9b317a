from __future__ import annotations

from pathlib import Path

import pytest

from gpswf_core.basis import GpswfBasis, GpswfParams, compute_basis


def find_repo_root(start: Path) -> Path:
    """Resolves the repo root using `pyproject.toml`."""
    start = start.resolve()
    for p in (start, *start.parents):
        if (p / "pyproject.toml").exists():
            return p
    raise RuntimeError(f"Could not find repo root from {start}")


REPO_ROOT = find_repo_root(Path(__file__))


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session")
def legendre_c5() -> GpswfBasis:
    """alpha = 0, c = 5, n = 0..40."""
    return compute_basis(GpswfParams(alpha=0.0, c=5.0), 40)


@pytest.fixture(scope="session")
def gegenbauer_c10() -> GpswfBasis:
    """alpha = 0.5, c = 10, n = 0..30."""
    return compute_basis(GpswfParams(alpha=0.5, c=10.0), 30)


@pytest.fixture(scope="session")
def example_basis() -> GpswfBasis:
    """alpha = 1, c = 50, n = 0..48 (the worked-example family)."""
    return compute_basis(GpswfParams(alpha=1.0, c=50.0), 48)
