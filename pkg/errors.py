# -*- coding: utf-8 -*-
#
#       Copyright 2026 hexcluster authors
#

# Meta
__license__ = "AGPLv3"


class HexClusterError(Exception):
    """
    Base class for every error raised by hexcluster modules.
    Each subclass carries the process exit code the CLI maps it to.
    """
    exit_code = 1


class InputError(HexClusterError):
    """
    A file could not be read or written
    """
    exit_code = 1


class FormatError(HexClusterError):
    """
    Malformed input: JSON layout, potential profile tables,
    polygon loops
    """
    exit_code = 2


class PreconditionError(HexClusterError):
    """
    An operation was called outside of its domain
    """
    exit_code = 3


class CheckFailed(HexClusterError):
    """
    A bound or identity check did not hold
    """
    exit_code = 4
