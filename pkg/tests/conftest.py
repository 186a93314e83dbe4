import json

import pytest

from uavplace import Point3, load_scenario_file
from uavplace.data import data_path


@pytest.fixture(scope="session")
def scenario_a():
    return load_scenario_file(data_path("scenario_a.json"))


@pytest.fixture(scope="session")
def scenario_b():
    return load_scenario_file(data_path("scenario_b.json"))


def _load_positions(name):
    doc = json.loads(data_path(name).read_text())
    return [(p["id"], Point3(*p["position"])) for p in doc["positions"]]


@pytest.fixture(scope="session")
def positions_a():
    return _load_positions("positions_a.json")


@pytest.fixture(scope="session")
def positions_b():
    return _load_positions("positions_b.json")
