"""Symbolic engine for temporal constraint languages over (Q, <)."""

__version__ = "0.1.0"

from .orders import WeakOrder, canonicalize, enumerate_weak_orders  # noqa: E402,F401
from .relations import Language, TemporalRelation, catalog, relation_of  # noqa: E402,F401
