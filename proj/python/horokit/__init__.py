"""Dyadic horolattice verification toolkit: hyperbolic half-space geometry,
window lattices, UDBG profiles, bottleneck matchings, action transport, and
horospherical orbit experiments."""

import json as _json

from horokit._core import *  # noqa: F401,F403
from horokit._core import translation_certificate_json as _cert_json

__version__ = "0.1.0"


def verify_translation_like(action, k):
    """Word-by-word freeness/displacement certificate, as a dict."""
    return _json.loads(_cert_json(action, k))
