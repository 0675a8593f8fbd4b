"""Finite p-group workbench: pc-presentation arithmetic, structure, derivations
and certified non-inner automorphisms of order p."""

from . import kernels
from .catalog import build, catalog_build, load_corpus
from .derivations import Module, Source, derivation_family, derivation_from_images
from .errors import PgwbError
from .morphisms import GroupMap, is_inner
from .oracle import brute_force_automorphisms, noninner_bruteforce
from .pc import Element, GroupContext, consistency_check, load_group, parse_pcp
from .search import Certificate, find_noninner_order_p, verify_certificate

__version__ = "0.1.0"
BACKEND = kernels.BACKEND

__all__ = [
    "BACKEND", "Certificate", "Element", "GroupContext", "GroupMap", "Module", "PgwbError",
    "Source", "brute_force_automorphisms", "build", "catalog_build", "consistency_check",
    "derivation_family", "derivation_from_images", "find_noninner_order_p", "is_inner",
    "load_corpus", "load_group", "noninner_bruteforce", "parse_pcp", "verify_certificate",
]
