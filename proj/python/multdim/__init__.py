"""Python bindings for the multdim C++ core.

The compiled extension ``_multdim`` lives inside this package when installed
via the wheel, or on ``PYTHONPATH`` (next to the build tree) during
development; both layouts are supported.
"""

import json as _json

try:
    from ._multdim import *  # noqa: F401,F403
    from ._multdim import __version__, build_construction as _build_construction
except ImportError:  # build-tree layout: extension is a top-level module
    from _multdim import *  # noqa: F401,F403
    from _multdim import __version__, build_construction as _build_construction


def build_construction(levels=1, mode="scaled", budget=2_000_000):
    """Build the layered counterexample and return its summary as a dict."""
    return _json.loads(_build_construction(levels, mode, budget))
