"""Hierarchical cooperative erasure codes.

Field elements are plain integers (coefficient bitmasks). Node ids and
symbol positions are 1-based, as in the config files.
"""

from ._hiercode import Code, HierCodeError, load, parse

__all__ = ["Code", "HierCodeError", "load", "parse"]
