"""Exception hierarchy shared by every layer of the workbench."""


class RealizabilityError(Exception):
    pass


class CapacityExceeded(RealizabilityError):
    """An exhaustive enumeration would exceed its configured bound."""


class InvalidPaks(RealizabilityError):
    def __init__(self, axiom, witness=None):
        self.axiom = axiom
        self.witness = witness
        msg = f"axiom {axiom} fails"
        if witness is not None:
            msg += f" at {witness}"
        super().__init__(msg)


class SchemaError(RealizabilityError):
    def __init__(self, field, reason=""):
        self.field = field
        super().__init__(f"{field}: {reason}" if reason else str(field))


class ParseError(RealizabilityError):
    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


class UnboundVariable(RealizabilityError):
    pass


class IndexMismatch(RealizabilityError):
    pass


class KindError(RealizabilityError):
    pass


class RuleMismatch(RealizabilityError):
    def __init__(self, node, reason):
        self.node = node
        self.reason = reason
        super().__init__(f"node {node}: {reason}")


class FreshnessViolation(RuleMismatch):
    pass


class ModelShapeError(RealizabilityError):
    pass
