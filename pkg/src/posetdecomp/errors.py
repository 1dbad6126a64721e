"""Exception types shared by all modules."""


class PosetDecompError(Exception):
    pass


class ParseError(PosetDecompError, ValueError):
    """Malformed input document (cycle, duplicate id, unknown element...)."""


class PreconditionError(PosetDecompError, ValueError):
    pass


class InvariantError(PosetDecompError, RuntimeError):
    """A theorem-level invariant failed; indicates a bug or a false claim."""


class ResourceError(PosetDecompError, RuntimeError):
    """A configured enumeration cap was exceeded."""
