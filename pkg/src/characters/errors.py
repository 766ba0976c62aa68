class CharacterError(Exception):
    """Base class for character and Bernoulli failures."""


class BoundExceeded(CharacterError):
    pass


class OddCharacter(CharacterError):
    pass


class HypothesisViolation(CharacterError):
    pass
