import json

import pytest
import redis

import store.Redis
from errors import PreconditionError
from hexcluster import Configuration
from oracle import OracleTable
from StoreFactory import StoreFactory
from store.Json import Json


@pytest.fixture
def config(tmp_path):
    ini = tmp_path / "hexcluster.ini"
    ini.write_text(
        "[General]\n"
        "store = Json\n"
        "oracle_table = {0}\n"
        "oracle_cap = 7\n".format(tmp_path / "oracle.json"))
    return Configuration(str(ini))


def test_factory_loads_backends():
    assert StoreFactory.getStore("Json") is Json
    assert StoreFactory.getStore("Redis") is store.Redis.Redis
    with pytest.raises(ImportError):
        StoreFactory.getStore("Nope")


def test_table_is_computed_then_cached(config, tmp_path):
    table = OracleTable(config)
    assert table.list_values(6) == {1: 0, 2: 1, 3: 3, 4: 5, 5: 7, 6: 9}
    saved = json.loads((tmp_path / "oracle.json").read_text())
    assert saved["6"] == 9

    # the cache is trusted as it is
    (tmp_path / "oracle.json").write_text(json.dumps(dict(saved, **{"6": 99})))
    assert OracleTable(config).list_values(6)[6] == 99
    assert OracleTable(config).list_values(6, from_cache=False)[6] == 9


def test_cap_from_config(config):
    with pytest.raises(PreconditionError):
        OracleTable(config).list_values(8)


def test_corrupt_table_is_rebuilt(config, tmp_path):
    (tmp_path / "oracle.json").write_text("{broken")
    assert OracleTable(config).list_values(4)[4] == 5
    assert json.loads((tmp_path / "oracle.json").read_text())["4"] == 5


class DeadRedis(object):
    def __init__(self, *args, **kwargs):
        pass

    def ping(self):
        raise redis.exceptions.ConnectionError("no server")


class DictRedis(object):
    def __init__(self, *args, **kwargs):
        self.hashes = {}

    def ping(self):
        return True

    def hgetall(self, key):
        return dict(self.hashes.get(key, {}))

    def hset(self, key, field, value):
        self.hashes.setdefault(key, {})[field] = str(value)


def test_redis_without_server_degrades(config, monkeypatch):
    monkeypatch.setattr(store.Redis.redis, "StrictRedis", DeadRedis)
    table = OracleTable(config, store="Redis")
    assert table.store.redis is None
    assert table.list_values(5)[5] == 7


def test_redis_round_trip(config, monkeypatch):
    monkeypatch.setattr(store.Redis.redis, "StrictRedis", DictRedis)
    table = OracleTable(config, store="Redis")
    table.list_values(4)
    assert table.store.redis.hashes["hexcluster:oracle"]["4"] == "5"
    assert table.store.load() == {1: 0, 2: 1, 3: 3, 4: 5}
