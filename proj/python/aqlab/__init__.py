"""Python front end to the aqlab C++ core.

Structured results are plain dicts with the same layout as the CLI's JSON.
"""

import json

from ._aqlab import (
    Error,
    Inconclusive,
    InvalidInput,
    InvariantViolation,
    phi,
    rank,
    sphere_series,
)
from . import _aqlab

__all__ = [
    "Error",
    "Inconclusive",
    "InvalidInput",
    "InvariantViolation",
    "a_rs_tables",
    "eilenberg_maclane",
    "homotopy",
    "phi",
    "rank",
    "rational_check",
    "serre_audit",
    "sphere_homotopy",
    "sphere_series",
]


def eilenberg_maclane(characteristic, q, n, truncation, dump=False):
    """Homotopy dims of K(V, n), or the object itself when dump is true."""
    return json.loads(_aqlab.eilenberg_maclane_json(characteristic, q, n, truncation, dump))


def homotopy(obj):
    """Homotopy dims of a simplicial vector space given as a dict or JSON text."""
    text = obj if isinstance(obj, str) else json.dumps(obj)
    return json.loads(_aqlab.homotopy_json(text))


def sphere_homotopy(characteristic, q, n, truncation, max_weight):
    return json.loads(_aqlab.sphere_homotopy_json(characteristic, q, n, truncation, max_weight))


def a_rs_tables(r, s, truncation, max_weight=None, bar_bound=None):
    return json.loads(_aqlab.a_rs_tables_json(r, s, truncation, max_weight, bar_bound))


def serre_audit(characteristic, dims, pi_bound, mode="asymptotic"):
    """dims maps degree -> dim H^Q; pi_bound is D."""
    return json.loads(_aqlab.serre_audit_json(characteristic, dict(dims), pi_bound, mode))


def rational_check(dims, pi_finite):
    return json.loads(_aqlab.rational_check_json(dict(dims), pi_finite))
