class LabError(Exception):
    """Base class for every error raised by the laboratory."""


class DimensionMismatch(LabError):
    pass


class MissingGenerator(LabError):
    pass


class NotUnitary(LabError):
    def __init__(self, deviation, tolerance):
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not unitary: ||U*U - 1||_op = {deviation:.3e} exceeds {tolerance:.1e}"
        )


class NotSkewHermitian(LabError):
    def __init__(self, deviation, tolerance):
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not skew-hermitian: ||X + X*||_op = {deviation:.3e} exceeds {tolerance:.1e}"
        )


class EigensolverFailure(LabError):
    pass


class WitnessMismatch(LabError):
    pass


class NotAHomomorphism(LabError):
    pass


class PresentationMismatch(LabError):
    pass


class NoNormalFormBackend(LabError):
    pass


class SolverError(LabError):
    def __init__(self, message, residual=None, iterations=None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(message)


class WordSyntaxError(LabError, ValueError):
    pass
