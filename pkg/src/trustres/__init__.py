"""Possible and certain values in prioritized trust networks."""
from .engine import condense, resolve, resolve_all_keys
from .network import TrustNetwork, build_network, load_network, save_network
from .oracle import oracle_resolve
from .result import ResolutionResult

__all__ = [
    "ResolutionResult", "TrustNetwork", "build_network", "condense", "load_network",
    "oracle_resolve", "resolve", "resolve_all_keys", "save_network",
]
__version__ = "0.1.0"
