# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Exception hierarchy for drt-engine."""

from typing import Optional


class DRTError(Exception):
    """Base class for every error raised by drt-engine."""


class SceneError(DRTError):
    """Problem with a scene description."""


class SceneSyntaxError(SceneError):
    """Scene text that does not follow the grammar."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class SceneValidationError(SceneError):
    """Scene that parses but violates a model invariant."""

    def __init__(self, message: str, where: Optional[str] = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class DuplicateIdError(SceneValidationError):
    """Two objects, faces or terminals share the same id."""


class UnknownObjectError(SceneError, KeyError):
    """Lookup of an object, face, edge or tile id that is not in the scene."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown object"


class GeometryError(DRTError):
    """Interaction geometry that cannot be evaluated."""


class DegenerateGeometryError(GeometryError):
    """A closed-form denominator vanished (terminal on a plane or an edge)."""


class FaceLeftError(GeometryError):
    """An interaction point left the primitive that generates it."""


class InvalidPathError(DRTError):
    """A ray path that is not valid at the requested time."""


class ProfileError(DRTError):
    """Problem building or comparing channel profiles."""


class EmptyInputError(ProfileError):
    """A profile was requested from no snapshots."""


class LayoutMismatchError(ProfileError):
    """Two profile grids do not share the same bin layout."""


class ConfigError(DRTError):
    """Invalid run, trace or schedule configuration."""


class ToleranceExceededError(DRTError):
    """An oracle category exceeded its tolerance."""
