"""Exception types shared across the package."""


class CdgError(Exception):
    """Base class for all library errors."""


class InvalidCdgError(CdgError):
    """Raised when an event stream fails validation at construction time."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class AddExistingError(CdgError):
    """Add event targets a node or edge that is already present."""


class DeleteMissingError(CdgError):
    """Delete event targets a node or edge that is not present."""


class AttrChangeMissingError(CdgError):
    """Attribute-change event targets a node or edge that is not present."""


class EdgeEndpointMissingError(CdgError):
    """Edge addition references an endpoint that is not present."""


class UnknownTimestampError(CdgError):
    """Replay was asked for a time that is not a timestamp of the stream."""


class TooLargeError(CdgError):
    """Instance exceeds the size guard of an exhaustive-search oracle."""


class TimestampMismatchError(CdgError):
    """Compared dynamic graphs have different timestamp counts."""


class DimensionMismatchError(CdgError):
    """Compared dynamic graphs have different attribute dimensions."""


class LengthMismatchError(CdgError):
    """Compared trajectories have different lengths."""


class DepthMismatchError(CdgError):
    """Compared tree trajectories were built at different depths."""


class InvalidBoundError(CdgError):
    """Depth bound requested for an infeasible node count."""


class GenerationExhaustedError(CdgError):
    """Random generation could not satisfy its constraints within budget."""


class TargetNotCutRespectingError(CdgError):
    """Training target assigns unequal outputs to equal trajectory prefixes."""
