#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"

import importlib
import logging


class StoreFactory(object):

    @staticmethod
    def getStore(choice):
        logging.info("StoreFactory: trying dynamic loading of module : {0} ".format(choice))
        store = "store." + choice
        store_module = importlib.import_module(store)
        store_class = getattr(store_module, choice)

        return store_class


class Store(object):
    '''
    Base class for oracle table backends.
    A table maps the atom count N to the maximum bond count b*(N).
    '''

    def __init__(self, config):
        self.config = config

    def load(self):
        return {}

    def save(self, table):
        pass
