class ColemanError(Exception):
    """Base class for norm-system and Coleman-map failures."""


class NormFailure(ColemanError):
    pass


class InsufficientLayers(ColemanError):
    pass


class TraceNotZero(ColemanError):
    """A produced measure is not supported on Z_p^x; the pipeline is inconsistent."""
