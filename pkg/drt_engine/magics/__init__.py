# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""IPython magic commands for drt-engine."""

from .drt_magic import DRTMagics, load_ipython_extension

__all__ = ["DRTMagics", "load_ipython_extension"]
