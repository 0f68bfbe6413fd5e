"""Exception hierarchy.

Input problems (bad graph files, unknown vertices, bad flags) derive from
:class:`InputError` so the CLI can map them to exit code 2.
"""

from __future__ import annotations


class GpaLabError(Exception):
    """Base class for all errors raised by gpa_lab."""


class InputError(GpaLabError, ValueError):
    pass


class MalformedInput(InputError):
    pass


class EmptyGraph(InputError):
    pass


class NotBipartite(InputError):
    pass


class Disconnected(InputError):
    pass


class DuplicateVertexName(InputError):
    pass


class UnknownVertex(InputError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class ZeroMatrix(GpaLabError, ValueError):
    pass


class ConvergenceFailure(GpaLabError, RuntimeError):
    pass


class NonpositiveRatio(InputError):
    pass


class InconsistentRatios(GpaLabError, ValueError):
    pass


class ShapeMismatch(GpaLabError, ValueError):
    pass


class LabelCollision(ShapeMismatch):
    """Two basis labels of a tensor product concatenate to the same word."""


class UngradedComponent(GpaLabError, ValueError):
    pass


class NonScalarLoops(GpaLabError, ValueError):
    pass


class EmptyBlock(InputError):
    pass


class WrongBoxDegree(GpaLabError, ValueError):
    pass
