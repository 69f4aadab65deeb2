"""Shared fixtures: the documented blog example and synthetic datasets."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import synth  # noqa: E402
from anonmix import (  # noqa: E402
    AnnotationSet,
    Dataset,
    load_annotations,
    load_dataset,
    load_schema,
)

FIXTURES = Path(__file__).resolve().parent / "fixtures"
RUNNING_EXAMPLE = FIXTURES / "running_example"

# Seeds are pinned so that the qualitative loss-trend assertions hold on
# the generated data; see tests/test_acceptance.py.
SEED_SMALL = 11
SEED_MID = 22
SEED_BIG = 33
SEED_200 = 7
SEED_48 = 5


@dataclass(frozen=True)
class Bundle:
    """A loaded fixture plus the files it came from."""

    paths: dict[str, Path]
    dataset: Dataset
    annotations: AnnotationSet


def load_bundle(paths: dict[str, Path]) -> Bundle:
    schema = load_schema(paths["schema"])
    dataset = load_dataset(paths["data"], schema)
    annotations = load_annotations(paths["annotations"], dataset)
    return Bundle(paths=paths, dataset=dataset, annotations=annotations)


def _synth_bundle(tmp_path_factory, name: str, n: int, seed: int, **kwargs) -> Bundle:
    paths = synth.make_fixture(tmp_path_factory.mktemp(name), n, seed, **kwargs)
    return load_bundle(paths)


@pytest.fixture(scope="session")
def example() -> Bundle:
    return load_bundle(
        {
            "schema": RUNNING_EXAMPLE / "schema.json",
            "data": RUNNING_EXAMPLE / "blogs.csv",
            "annotations": RUNNING_EXAMPLE / "annotations.jsonl",
        }
    )


@pytest.fixture(scope="session")
def golden_release() -> str:
    return (RUNNING_EXAMPLE / "expected_release.csv").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def synth_small(tmp_path_factory) -> Bundle:
    return _synth_bundle(tmp_path_factory, "synth_small", 40, SEED_SMALL)


@pytest.fixture(scope="session")
def synth_mid(tmp_path_factory) -> Bundle:
    return _synth_bundle(
        tmp_path_factory, "synth_mid", 60, SEED_MID, extra_row_rate=0.6
    )


@pytest.fixture(scope="session")
def synth_big(tmp_path_factory) -> Bundle:
    return _synth_bundle(
        tmp_path_factory, "synth_big", 75, SEED_BIG, empty_note_rate=0.25
    )


@pytest.fixture(scope="session")
def synth_200(tmp_path_factory) -> Bundle:
    return _synth_bundle(tmp_path_factory, "synth_200", 200, SEED_200)


@pytest.fixture(scope="session")
def synth_48(tmp_path_factory) -> Bundle:
    return _synth_bundle(tmp_path_factory, "synth_48", 48, SEED_48)
