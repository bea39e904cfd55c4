"""Python interface to the DLF toolkit.

Family and node descriptions take the same shapes as the JSON config files:
a kind name such as ``"identity"`` or a dict such as
``{"kind": "fractional", "delta": 2}``.
"""

import json

from . import _dlf
from ._dlf import DlfError, Interpolant, contour_check, interpolate, kron

__all__ = [
    "Basis",
    "DlfError",
    "Interpolant",
    "contour_check",
    "interpolate",
    "kron",
    "solve",
]


def _encode(value):
    return value if isinstance(value, str) and value.lstrip().startswith(("{", '"')) else json.dumps(value)


def Basis(family="identity", N=8, a=-1.0, b=1.0, nodes="cgl"):
    """Validated DLF basis on [a, b] with N + 1 nodes."""
    return _dlf.Basis(_encode(family), N, a, b, _encode(nodes))


def solve(config, N=None):
    """Solves a collocation problem given as a dict, a JSON string or a file path."""
    if isinstance(config, dict):
        text = json.dumps(config)
    elif config.lstrip().startswith("{"):
        text = config
    else:
        with open(config, encoding="utf-8") as fh:
            text = fh.read()
    if N is None:
        N = []
    elif isinstance(N, int):
        N = [N]
    return _dlf.solve(text, list(N))
