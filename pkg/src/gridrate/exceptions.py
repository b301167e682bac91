class GridrateError(Exception):
    exit_code = 2


class ConfigurationError(GridrateError):
    exit_code = 1


class InvalidParameterError(GridrateError):
    exit_code = 1


class UnsupportedLuckFunctionError(GridrateError):
    exit_code = 1


class UnsupportedKernelError(GridrateError):
    exit_code = 1


class DataError(GridrateError):
    pass


class MalformedLineError(DataError):
    def __init__(self, path: object, line_number: int, reason: str) -> None:
        super().__init__(f"{path}:{line_number}: {reason}")
        self.line_number = line_number


class InvalidMatchError(DataError):
    pass


class UnknownPlayerError(DataError):
    pass


class IncompatibleGridError(DataError):
    pass


class DegenerateDistributionError(DataError):
    pass


class ImpossibleOutcomeError(DegenerateDistributionError):
    pass


class NumericalInstabilityError(DataError):
    pass


class ConvergenceError(DataError):
    pass


class IntegrityError(GridrateError):
    exit_code = 3


class SchemaVersionError(IntegrityError):
    pass


class ChecksumError(IntegrityError):
    def __init__(self, path: object, line_number: int, reason: str) -> None:
        super().__init__(f"{path}:{line_number}: {reason}")
        self.line_number = line_number
