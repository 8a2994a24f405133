"""Exception taxonomy shared across the toolkit."""


class DomainError(Exception):
    """Base class for all user-facing domain errors (CLI exit code 1)."""


class QuiverStructureError(DomainError):
    """Malformed quiver: dangling endpoints, duplicate ids, loops, 2-cycles."""


class CyclicQuiverError(DomainError):
    """Operation requires an acyclic quiver."""


class WalkError(DomainError):
    """Walk steps are not composable in the given quiver."""


class MutationError(DomainError):
    """Invalid mutation request (unknown vertex, loop or 2-cycle present)."""


class AlgebraError(DomainError):
    """Division by zero, unassigned variable, or mixed variable contexts."""


class WindowError(DomainError):
    """A translation-quiver window is too small for the requested check."""


class EmbeddingError(DomainError):
    """Spatial placement failed validation and could not be repaired."""


class InvariantViolation(DomainError):
    """An invariant the construction guarantees was observed to fail."""
