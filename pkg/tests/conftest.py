"""
Test configuration and utilities
"""

import json
import shutil
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Generator, Sequence

import pytest

from symprod.documents import FunctionalDocument
from symprod.polyalg import (
    EXACT,
    FiniteFunctional,
    MomentFunctional,
    PointMultiset,
    ScalarContext,
    evaluation_functional,
)
from symprod.utils.config import SymprodConfig


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests"""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Keep user config files and SYMPROD_* variables out of every test"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path))
    for name in (
        "SYMPROD_LOG_LEVEL",
        "SYMPROD_MODE",
        "SYMPROD_PRECISION",
        "SYMPROD_TOLERANCE",
        "SYMPROD_SEED",
        "SYMPROD_MAX_RETRIES",
        "SYMPROD_THREADS",
        "SYMPROD_PARTITION_LIMIT",
        "SYMPROD_PERMUTATION_LIMIT",
        "SYMPROD_PAIRING_LIMIT",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def exact() -> ScalarContext:
    return EXACT


@pytest.fixture
def floating() -> ScalarContext:
    return ScalarContext.floating(128, 1e-20)


@pytest.fixture
def config() -> SymprodConfig:
    return SymprodConfig()


@pytest.fixture
def two_points() -> MomentFunctional:
    """Moments of {(1):1, (2):1} up to degree 3: (2, 3, 5, 9)"""
    return moments_of([((1,), 1), ((2,), 1)], 3)


@pytest.fixture
def finite_210() -> FiniteFunctional:
    """Values (2, 1, 0) on {p, q, r}"""
    return FiniteFunctional(("p", "q", "r"), (2, 1, 0))


# Test utilities
def moments_of(
    entries: Sequence[Any], degree_bound: int, context: ScalarContext = EXACT
) -> MomentFunctional:
    """evaluation_functional of a multiset given as ((point, multiplicity), ...)"""
    num_vars = len(entries[0][0]) if entries else 1
    points = PointMultiset(num_vars, tuple((tuple(p), m) for p, m in entries), context)
    return evaluation_functional(points, degree_bound, context)


def write_document(path: Path, payload: Dict[str, Any]) -> str:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def functional_payload(f: Any) -> Dict[str, Any]:
    return FunctionalDocument.from_functional(f).model_dump(mode="json")


def as_fraction(value: Any) -> Fraction:
    """Real part of an exact scalar as a Fraction, for readable asserts"""
    assert value.im == 0
    return value.re
