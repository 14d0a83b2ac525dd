"""Exception hierarchy shared by all tropmon modules."""


class TropmonError(Exception):
    """Base class for domain errors raised by tropmon."""


class ConeNotPointed(TropmonError):
    """The cone has a nonzero lineality space."""


class NotSharp(TropmonError):
    """A monoid (or presentation) has nontrivial units.

    ``relation`` is set when the failure is traced to a single relation.
    """

    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


class NotBipartite(TropmonError):
    pass


class NotPositive(TropmonError):
    def __init__(self, message, generators=()):
        super().__init__(message)
        self.generators = tuple(generators)


class NotMonogenic(TropmonError):
    pass


class InvalidType(TropmonError):
    """A tropical type failed validation; ``violations`` lists why."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid tropical type: {lines}")


class InvalidConeData(TropmonError):
    pass


class PreconditionFailed(TropmonError):
    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("precondition failed: " + ", ".join(self.failures))


class ReductionError(TropmonError):
    pass


class NotConvex(TropmonError):
    pass


class NotLattice(TropmonError):
    pass


class InvalidBounds(TropmonError):
    pass
