"""Exception types shared across the package."""


class PosetfreeError(Exception):
    pass


class CycleError(PosetfreeError, ValueError):
    """Relation pairs whose transitive closure is not a strict order."""


class SizeGuardError(PosetfreeError, ValueError):
    """Input exceeds a brute-force guard from :mod:`posetfree.config`."""


class UnknownNameError(PosetfreeError, KeyError):
    pass


class EmptyFamilyError(PosetfreeError, ValueError):
    pass


class RangeError(PosetfreeError, ValueError):
    pass


class CorruptRecordError(PosetfreeError, ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CoverError(PosetfreeError, RuntimeError):
    """A grid partition failed its disjoint-cover self check."""


class SwapVerificationError(PosetfreeError, RuntimeError):
    """The shifted copy built by the gapped-shift argument is not a t-gapped induced copy."""


class VerificationError(PosetfreeError, RuntimeError):
    pass


class EmptyHypergraphError(PosetfreeError, ValueError):
    pass


class InfeasibleParamsWarning(UserWarning):
    """Container parameters miss the quantitative hypotheses; the builder still runs."""
