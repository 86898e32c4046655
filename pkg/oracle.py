# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import logging

from errors import PreconditionError
from groundstate import ORACLE_CAP, brute_force_max_bonds
from StoreFactory import StoreFactory


class OracleTable(object):
    """
    Maximum bond counts b*(N) of the exhaustive oracle, cached in a store
    backend (Json file or Redis hash) and recomputed on a miss.
    """

    def __init__(self, config, store=None, workers=None):
        self.config = config
        self.cap = int(config.get("General", "oracle_cap", ORACLE_CAP))
        self.workers = workers
        choice = store or config.get("General", "store", "Json")
        self.store = StoreFactory.getStore(choice)(config)
        self._values = {}

    def _compute(self, N):
        bonds, _ = brute_force_max_bonds(N, cap=self.cap, workers=self.workers)
        return bonds

    def list_values(self, nmax, from_cache=True):
        """
        b*(N) for N = 1..nmax as a dict.
        """
        if nmax > self.cap:
            raise PreconditionError(
                "Oracle: N={0} is over the cap {1}".format(nmax, self.cap))
        self._values.clear()
        if from_cache:
            self._values.update(self.store.load())
        missing = [N for N in range(1, nmax + 1) if N not in self._values]
        if not missing:
            logging.info("Oracle: loading values from cache")
        for N in missing:
            self._values[N] = self._compute(N)
        if missing:
            self.store.save(self._values)
        return dict((N, self._values[N]) for N in range(1, nmax + 1))
