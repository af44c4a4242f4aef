"""Shared exception types."""


class TrirepError(Exception):
    """Base class for all package-specific errors."""


class SieveMemoryError(TrirepError):
    """A requested table would exceed the configured memory budget."""


class TruantBoundError(TrirepError):
    """A truant search resolved only above the truant bound.

    Raised when a form misses nothing from the target set below
    ``truant_bound`` but does miss something below ``leaf_bound``.  Such a
    node must never be silently recorded as a leaf; the caller has to retry
    with a larger truant bound.
    """

    def __init__(self, form, found, truant_bound, leaf_bound):
        self.form = form
        self.found = found
        self.truant_bound = truant_bound
        self.leaf_bound = leaf_bound
        super().__init__(
            f"form [{form}] misses no target element <= {truant_bound} "
            f"but misses {found} <= {leaf_bound}; raise the truant bound"
        )


class CacheFormatError(TrirepError):
    """A sieve cache file is malformed or failed an integrity check."""


class SetSpecError(TrirepError):
    """Target-set text failed to parse.  Carries the character position."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")
