"""Exception hierarchy shared by every layer of the lab."""


class MilnorLabError(Exception):
    """Base class for all errors raised by milnorlab."""


class PolySyntaxError(MilnorLabError, ValueError):
    """Malformed polynomial text.  ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class VariableRangeError(MilnorLabError, ValueError):
    """A variable index falls outside the ambient dimension."""


class DimensionMismatch(MilnorLabError, ValueError):
    """Operands live in different ambient dimensions."""


class ResourceLimitExceeded(MilnorLabError, RuntimeError):
    """The configured pair-reduction budget of Buchberger's algorithm ran out."""


class NotZeroDimensional(MilnorLabError, ValueError):
    """The ideal has a positive-dimensional variety (infinite staircase)."""


class IllConditioned(MilnorLabError, RuntimeError):
    """Numerical clustering or residual checks could not be certified."""


class WNotInSingularLocus(MilnorLabError, ValueError):
    """Some component of the field does not vanish on W."""


class WNotCoordinate(MilnorLabError, ValueError):
    """W is expected in the form w_i1 = ... = w_id = 0."""


class NotGraphForm(MilnorLabError, ValueError):
    """No polynomial inverse is available for the straightening map."""


class ZeroField(MilnorLabError, ValueError):
    """The vector field is identically zero."""


class InconsistentBalance(MilnorLabError, ValueError):
    """The global balance identity cannot be satisfied by the given data."""


class MissingTableEntry(MilnorLabError, KeyError):
    """A sigma/tau coefficient required by the nu formula is absent."""


class AmbiguousMatching(MilnorLabError, RuntimeError):
    """Trajectory matching across the t-schedule failed its conservation check."""


class NotTotallySimple(MilnorLabError, ValueError):
    """The component is not totally simple for the given field."""


class NonCoprimeAB(MilnorLabError, ValueError):
    """a(lambda) and b(lambda) share a root."""


class RepeatedRootsInPm(MilnorLabError, ValueError):
    """P_m has a repeated root."""


class UnknownGenerator(MilnorLabError, KeyError):
    """Requested series generator is not shipped with the catalog."""
