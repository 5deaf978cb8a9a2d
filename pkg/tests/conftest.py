"""Session fixtures.

The stand-in dataset (see replica.py) is built once per session and saved to
a temp directory; most integration tests read it from disk exactly as the
CLI would.
"""

import pytest

import replica
from ulsa.dataset import save_dataset


@pytest.fixture(scope="session")
def replica_ds():
    return replica.build_replica(seed=0)


@pytest.fixture(scope="session")
def replica_path(replica_ds, tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "dataset.json"
    save_dataset(replica_ds, path)
    return path


@pytest.fixture(scope="session")
def clusters_ds():
    return replica.clustering_fixture(seed=7, per_type=10)


@pytest.fixture(scope="session")
def clusters_path(clusters_ds, tmp_path_factory):
    path = tmp_path_factory.mktemp("clusters") / "dataset.json"
    save_dataset(clusters_ds, path)
    return path
