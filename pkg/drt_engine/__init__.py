# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""drt-engine: dynamic ray tracing for time-variant radio channels."""

try:
    from importlib.metadata import PackageNotFoundError, version

    __version__ = version("drt-engine")
except PackageNotFoundError:
    # Fallback when using the package from a source checkout without installing it
    import warnings
    warnings.warn("Importing 'drt_engine' outside a proper installation.")
    __version__ = "dev"


def load_ipython_extension(ipython):
    """`%load_ext drt_engine` registers the %drt / %%drt magics."""
    from .magics import load_ipython_extension as _load

    _load(ipython)
