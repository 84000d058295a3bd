class LabError(ValueError):
    pass


class ConfigError(LabError):

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.detail = message


class ConfigParseError(LabError):
    pass


class MissingConfigError(LabError):
    pass


class NotPositiveDefiniteError(LabError):
    pass


class DegenerateSampleError(LabError):
    pass


class OriginSampleError(LabError):
    pass


class OutOfFamilyError(LabError):
    pass


class IntegrationError(LabError):
    pass


class InvalidCaseError(LabError):
    pass


class InfiniteMomentError(LabError):
    pass


class CollinearAnglesError(LabError):
    pass


class NearCollinearError(LabError):
    pass


class GeometryError(LabError):
    pass


class BudgetViolationError(LabError):
    pass


class DegenerateGridError(LabError):
    pass


class InsufficientSpanError(LabError):
    pass
