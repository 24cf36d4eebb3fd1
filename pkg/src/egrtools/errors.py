"""Exception hierarchy shared by all egrtools modules."""


class EgrError(Exception):
    """Base class for every error raised by egrtools."""


class MalformedEncoding(EgrError, ValueError):
    pass


class UnsupportedOrder(EgrError, ValueError):
    pass


class UnknownVertex(EgrError, KeyError):
    pass


class NotAnEdge(EgrError, ValueError):
    pass


class NotAPath(EgrError, ValueError):
    pass


class Acyclic(EgrError, ValueError):
    pass


class OddGirth(EgrError, ValueError):
    pass


class EvenGirth(EgrError, ValueError):
    pass


class NotRegular(EgrError, ValueError):
    pass


class NotATree(EgrError, ValueError):
    pass


class NotApplicable(EgrError, ValueError):
    pass


class BadCandidate(EgrError, ValueError):
    pass


class DegreeTooSmall(EgrError, ValueError):
    pass


class ParityViolation(EgrError, ValueError):
    pass
