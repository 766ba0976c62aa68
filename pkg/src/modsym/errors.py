class ModsymError(Exception):
    """Base class for Manin-symbol failures."""


class InadmissiblePair(ModsymError):
    pass


class ZeroIndex(ModsymError):
    pass
