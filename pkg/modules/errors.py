"""
Exception hierarchy for pastelab.
Validation violations are exceptions too, so a validator can collect every
violation it finds and raise them together.
"""

from typing import Any, Dict, List, Sequence


class PastelabError(Exception):
    """Base class for every error raised by pastelab."""

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the error to a JSON-friendly dictionary.

        Returns:
            dict: error kind, message and detail fields
        """
        data: Dict[str, Any] = {"error": self.__class__.__name__, "message": self.message}
        for key, value in self.details.items():
            data[key] = _jsonable(value)
        return data


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


# Input and structure

class ParseError(PastelabError):
    """Malformed scheme file."""


class StructureError(PastelabError):
    """Well-formed file describing an impossible graph (dangling edge, duplicate id, ...)."""


class EmbeddingError(PastelabError):
    """Rotation data does not describe a plane embedding (Euler's formula fails)."""


class EmptyWidths(PastelabError):
    """A theta2 shape needs at least one column."""


class UnknownVertex(PastelabError):
    """A vertex id that the scheme does not contain."""


class NotAnEdge(PastelabError):
    """An edge id that the scheme does not contain."""


class ConfigError(PastelabError):
    """Invalid run configuration."""


# Validation violations

class SchemeViolation(PastelabError):
    """One reason a plane graph fails to be a pasting scheme."""


class NotAnchorable(SchemeViolation):
    """A face whose boundary does not split into a source and a target path."""


class MultipleSources(SchemeViolation):
    """Zero or several local sources."""


class MultipleSinks(SchemeViolation):
    """Zero or several local sinks."""


class CycleFound(SchemeViolation):
    """A directed cycle."""


class PartitionViolation(SchemeViolation):
    """An edge that breaks one of the two edge partitions."""


class ProhibitedConfiguration(SchemeViolation):
    """Darts alternate out, in, out, in around a vertex."""


class InvalidSchemeError(PastelabError):
    """Raised with every violation found by the validator."""

    def __init__(self, violations: Sequence[SchemeViolation]):
        self.violations: List[SchemeViolation] = list(violations)
        names = ", ".join(sorted({v.__class__.__name__ for v in self.violations}))
        super().__init__(f"invalid pasting scheme: {names}", violations=self.violations)


# Paths and sub-schemes

class NotParallel(PastelabError):
    """Paths with different endpoints."""


class NotAbove(PastelabError):
    """The first path does not lie above the second."""


class NotReachable(PastelabError):
    """No directed path between the two vertices."""


class TrivialPath(PastelabError):
    """An empty path where a non-empty one is required."""


class NotTopCell(PastelabError):
    """The face's source path is not a subpath of the scheme's source path."""


class NotBottomCell(PastelabError):
    """The face's target path is not a subpath of the scheme's target path."""


class NotFullPath(PastelabError):
    """A path that does not run from the global source to the global sink."""


class NotInPge(PastelabError):
    """A cube point that breaks a directly-above constraint."""


# Posets, categories and simplicial sets

class PosetError(PastelabError):
    """A relation that is not a partial order."""


class NotFull(PastelabError):
    """A poset inclusion that does not reflect the order."""


class NotDwyer(PastelabError):
    """An inclusion without a Dwyer witness."""


class NotMonotone(PastelabError):
    """A map of posets that does not preserve the order."""


class NotOneWay(PastelabError):
    """A category with non-trivial endomorphisms or cyclic reachability."""


class NotStrictlyBelow(PastelabError):
    """Objects c0, c1 with c0 not strictly below c1."""


class PreconditionFailed(PastelabError):
    """Inputs outside an operation's domain."""


class NotSubcomplex(PastelabError):
    """A chain set that is not closed under subchains of its ambient nerve."""


class NotAnArrow(PastelabError):
    """A sequence of paths that is not a chain of parallel paths."""

