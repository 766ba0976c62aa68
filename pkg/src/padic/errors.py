class ArithmeticFault(Exception):
    """Base class for failures of precision-tracked arithmetic."""


class NonUnitInverse(ArithmeticFault):
    pass


class NonUnit(ArithmeticFault):
    pass


class PrecisionExhausted(ArithmeticFault):
    pass


class ConvergenceDomain(ArithmeticFault):
    pass


class NonDivisible(ArithmeticFault):
    pass


class NonIntegral(ArithmeticFault):
    pass


class Indeterminate(ArithmeticFault):
    """Raised when the working precision cannot certify an answer."""


class RingMismatch(ArithmeticFault):
    pass
