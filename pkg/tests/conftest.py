"""Shared fixtures: the packaged reference table and hypothesis profiles."""

from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from bondedknots.diagram import parse_pd
from bondedknots.pipeline import reference_table

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def table() -> list[dict[str, str]]:
    return reference_table()


@pytest.fixture(scope="session")
def by_name(table) -> dict[str, dict[str, str]]:
    return {e["name"].split("#")[0]: e for e in table}


@pytest.fixture(scope="session")
def table_diagrams(table):
    return {e["name"].split("#")[0]: parse_pd(e["pd"], e["name"]) for e in table}
