#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta

from StoreFactory import Store
import logging

import redis


class Redis(Store):
    """
    Keep the oracle table in a redis hash, field N and value b*.
    Without a reachable server every call degrades to an empty table.
    """

    def __init__(self, config):
        super(Redis, self).__init__(config)
        self.cache_key = self.config.get("General", "redis_key", "hexcluster:oracle")
        self.redis = self._init_redis_conn(
            self.config.get("General", "redis_host", "localhost"))

    def _init_redis_conn(self, RedisHost):
        redis_connection = redis.StrictRedis(
            RedisHost, db=0, decode_responses=True)
        try:
            if redis_connection.ping():
                return redis_connection
        except Exception as e:
            logging.error(
                "Redis: all subsequent calls will recompute the oracle, cache error: {0}".format(e))
        return None

    def load(self):
        if self.redis is None:
            return {}
        try:
            result = self.redis.hgetall(self.cache_key)
        except Exception as e:
            logging.error("Redis: redis error: {0}".format(e))
            return {}
        table = {}
        for k, v in result.items():
            try:
                table[int(k)] = int(v)
            except ValueError:
                logging.error("Redis: dropping bad oracle entry {0}={1}".format(k, v))
        logging.debug("Redis: loaded {0} oracle entries".format(len(table)))
        return table

    def save(self, table):
        if self.redis is None:
            return
        for k, v in table.items():
            try:
                self.redis.hset(self.cache_key, str(k), int(v))
            except Exception as e:
                logging.error("Redis: error saving to cache : {0}".format(e))
