"""Exception types raised across the package."""


class TowerError(ValueError):
    """Base class for all domain errors raised by modtower."""


# base field
class NotPrime(TowerError):
    pass


class ReducibleModulus(TowerError):
    pass


class DegreeMismatch(TowerError):
    pass


class DivisionByZero(TowerError, ZeroDivisionError):
    pass


class ZeroToZero(TowerError):
    pass


class ZeroInput(TowerError):
    pass


class NNotDividingGroupOrder(TowerError):
    pass


# towers
class EvenCharacteristic(TowerError):
    pass


class NoCubeStructure(TowerError):
    pass


class QIsFour(TowerError):
    pass


class InvalidTower(TowerError):
    """Base field or starter does not satisfy the tower preconditions."""


class IrreducibilityFailure(TowerError):
    pass


class LevelMismatch(TowerError):
    pass


class JOutOfRange(TowerError):
    pass


# orders
class ZeroElement(TowerError):
    pass


class InexactOrder(TowerError):
    pass


# number theory
class ZeroArgument(TowerError):
    pass


class CongruenceViolation(TowerError):
    pass


class OrderViolation(TowerError):
    pass


class UnsupportedDegree(TowerError):
    pass


# voloch
class NotApplicable(TowerError):
    pass


class DomainError(TowerError):
    pass


class NotCoprime(TowerError):
    pass
