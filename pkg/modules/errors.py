# Exceptions raised by the smod modules
#
# Every class knows the exit code the command line maps it to.

class SmodError(Exception):
    exit_code = 2

    def __init__(self, message, details=None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_json(self):
        return {
            "type": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }

class ModelError(SmodError):
    """Model data that violates a type invariant (bad lattice, |tau| <= 1, ...)"""

class DomainError(SmodError):
    """Input combination for which the requested operation is undefined"""

class SchemaError(SmodError):
    """Problem file does not match the published schema"""

class InvariantViolation(SmodError):
    """Two independent routes disagree; always a bug"""

class NoConvergence(SmodError):
    """Numerical inversion did not converge"""

class NeedsData(SmodError):
    exit_code = 3

class NoPoissonStructure(SmodError):
    exit_code = 3
