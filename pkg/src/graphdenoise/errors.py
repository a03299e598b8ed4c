"""Exception hierarchy.

Every validation failure raises a subclass of :class:`GraphDenoiseError`
(itself a ``ValueError``), so callers can catch the whole family at once.
"""


class GraphDenoiseError(ValueError):
    pass


# graph construction
class DuplicateEdgeError(GraphDenoiseError):
    pass


class SelfLoopError(GraphDenoiseError):
    pass


class NonPositiveWeightError(GraphDenoiseError):
    pass


class EmptyGraphError(GraphDenoiseError):
    pass


class ZeroVarianceColumnError(GraphDenoiseError):
    pass


class DimensionMismatchError(GraphDenoiseError):
    pass


# filtrations
class SizesOutOfRangeError(GraphDenoiseError):
    pass


class TooFewLevelsError(GraphDenoiseError):
    pass


class InvalidPartitionError(GraphDenoiseError):
    pass


# kernels / curves
class NonPositiveAlphaError(GraphDenoiseError):
    pass


class EmptyGridError(GraphDenoiseError):
    pass


class TooFewPointsError(GraphDenoiseError):
    pass


class NonPositiveEpsilonError(GraphDenoiseError):
    pass


# datasets and classification
class MissingLabelError(GraphDenoiseError):
    pass


class NonBinaryLabelError(GraphDenoiseError):
    pass


class MissingValueError(GraphDenoiseError):
    pass


class DuplicateIdError(GraphDenoiseError):
    pass


class EmptyIntersectionError(GraphDenoiseError):
    pass


class SingleClassError(GraphDenoiseError):
    pass


class NonPositiveRegError(GraphDenoiseError):
    pass


class NoPositivesError(GraphDenoiseError):
    pass


class TooFewSamplesError(GraphDenoiseError):
    pass


class InvalidLevelError(GraphDenoiseError):
    pass
