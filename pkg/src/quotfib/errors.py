"""Exception types shared across the package."""


class QuotfibError(Exception):
    """Base class for every error raised by quotfib."""


# field arithmetic

class DivisionByZero(QuotfibError, ZeroDivisionError):
    pass


class NotADivisor(QuotfibError, ValueError):
    pass


class ConductorMismatch(QuotfibError, ValueError):
    pass


class RootSearchTooLarge(QuotfibError, ArithmeticError):
    """The branch search for a k-th root exceeds the configured budget."""


# projective linear algebra

class DimMismatch(QuotfibError, ValueError):
    pass


class SingularMatrix(QuotfibError, ValueError):
    pass


class OrderExceedsCap(QuotfibError, ArithmeticError):
    pass


class NonIsolatedFixedLocus(QuotfibError, ValueError):
    pass


class ConductorTooSmall(QuotfibError, ArithmeticError):
    pass


# canonical forms

class NotWeightedCycle(QuotfibError, ValueError):
    pass


class ProductNotOne(QuotfibError, ValueError):
    pass


class NotCommuting(QuotfibError, ValueError):
    pass


class WrongOrder(QuotfibError, ValueError):
    pass


class FixedSetsNotDisjoint(QuotfibError, ValueError):
    pass


class NotFullCycle(QuotfibError, ValueError):
    pass


class NotKlein(QuotfibError, ValueError):
    pass


class NotFaithful(QuotfibError, ValueError):
    pass


# torsion points

class InvalidUnit(QuotfibError, ValueError):
    pass


class NotGenerating(QuotfibError, ValueError):
    pass


class EnumerationTooLarge(QuotfibError, ValueError):
    pass


# classification

class NotASubgroup(QuotfibError, ValueError):
    pass


class InvariantMismatch(QuotfibError, AssertionError):
    pass


# finite fibered-product model

class ActionOrderMismatch(QuotfibError, ValueError):
    pass


class LevelIncompatible(QuotfibError, ValueError):
    pass


class Incompatible(QuotfibError, ValueError):
    pass


class NoTransport(QuotfibError, ValueError):
    pass


# I/O

class ParseError(QuotfibError, ValueError):
    pass
