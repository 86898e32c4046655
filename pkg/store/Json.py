#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta

from StoreFactory import Store
from errors import InputError
import json
import logging


class Json(Store):
    """
    Keep the oracle table in a JSON file {"N": b*}
    """

    def __init__(self, config):
        super(Json, self).__init__(config)
        self.table_file = self.config.get("General", "oracle_table", "oracle.json")
        logging.info("Json: oracle table at {0}".format(self.table_file))

    def load(self):
        try:
            with open(self.table_file, 'r') as json_file:
                JSON = json.load(json_file)
        except (IOError, OSError):
            logging.debug("Json: no oracle table at {0} yet".format(self.table_file))
            return {}
        except ValueError as e:
            # a corrupt table is rebuilt, not fatal
            logging.error(
                "Json: could not read json file {0} , error : {1}".format(
                    self.table_file, e))
            return {}
        try:
            return dict((int(k), int(v)) for k, v in JSON.items())
        except (AttributeError, TypeError, ValueError) as e:
            logging.error("Json: malformed oracle table {0}: {1}".format(
                self.table_file, e))
            return {}

    def save(self, table):
        JSON = dict((str(k), int(v)) for k, v in sorted(table.items()))
        try:
            with open(self.table_file, 'w') as json_file:
                json.dump(JSON, json_file, indent=2, sort_keys=False)
                json_file.write('\n')
        except (IOError, OSError) as e:
            raise InputError(
                "Json: could not write oracle table {0}: {1}".format(
                    self.table_file, e))
        logging.debug("Json: saved {0} oracle entries".format(len(JSON)))
