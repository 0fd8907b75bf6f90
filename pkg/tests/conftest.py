"""
Pytest configuration and shared fixtures.
"""

import numpy as np
import pytest
from pyspark.sql import SparkSession

from src.common.seeding import stream
from src.common.spark_session import create_spark_session, local_master


@pytest.fixture(scope="session")
def spark() -> SparkSession:
    """
    Create a SparkSession for the parallel-ensemble tests.

    Uses session scope to reuse the same Spark context across all tests;
    parallel_map finds it as the active session.
    """
    spark = create_spark_session("pytest_maxwell", master=local_master(2))

    yield spark

    spark.stop()


@pytest.fixture(scope="session")
def sc(spark: SparkSession):
    """SparkContext from the session fixture."""
    return spark.sparkContext


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh deterministic generator per test."""
    return stream(12345)


@pytest.fixture
def isolated_output(tmp_path, monkeypatch):
    """Run from a temporary directory with MAXWELL_THREADS unset."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("MAXWELL_THREADS", raising=False)
    return tmp_path
