"""Symmetry tools for characteristic modes: point groups, subduction,
analytic sphere traces, mode solving, classification and tracking.

Submodules load on first attribute access, which keeps `import modesub`
cheap and lets the command-line entry point cap BLAS thread counts before
numpy comes in.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = ("pointgroup", "sphwave", "subduction", "symaction",
               "cmsolver", "tracediagram", "tracker", "fileio", "svgplot",
               "cli")

__all__ = list(_SUBMODULES) + ["__version__"]


def __getattr__(name):
    if name in _SUBMODULES:
        module = importlib.import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
