"""Touching families of Jordan regions and curves: models, colouring, and checks."""

from .model import (ContactFamily, ContactPoint, Kind, family_stats, load_family,
                    dump_family, validate_family)

__all__ = ["ContactFamily", "ContactPoint", "Kind", "family_stats", "load_family",
           "dump_family", "validate_family"]
__version__ = "0.1.0"
