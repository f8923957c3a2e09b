"""Exception hierarchy for domain errors.

Everything raised on bad mathematical input derives from BfreeflowError so
the CLI can map any domain failure to a single exit code.
"""


class BfreeflowError(Exception):
    """Base class for all domain errors raised by this package."""


class NotCoprimeError(BfreeflowError):
    def __init__(self, a: int, b: int):
        super().__init__(f"moduli {a} and {b} are not coprime")
        self.pair = (a, b)


class TooSmallError(BfreeflowError):
    def __init__(self, b: int):
        super().__init__(f"modulus {b} is < 2")
        self.modulus = b


class PeriodOverflowError(BfreeflowError):
    def __init__(self, period: int):
        super().__init__(f"basis period {period} exceeds 128 bits")
        self.period = period


class NotInComplementError(BfreeflowError):
    """Residue vector lies in the forbidden set where a return time or an
    induced step is undefined."""


class ShiftTooLargeError(BfreeflowError):
    def __init__(self, k: int, length: int):
        super().__init__(f"cannot shift by {k}: word has length {length}")


class NotUniquelyOmittingError(BfreeflowError):
    def __init__(self, index: int, count: int):
        super().__init__(
            f"modulus #{index} omits {count} classes, expected exactly 1"
        )
        self.index = index
        self.count = count


class InputTooShortError(BfreeflowError):
    def __init__(self, needed: int, got: int):
        super().__init__(f"input word too short: need {needed} bits, got {got}")
        self.needed = needed
        self.got = got


class NotOmittingError(BfreeflowError):
    def __init__(self, position: int):
        super().__init__(
            f"word has a 1 at position {position}, which the residue vector forces to 0"
        )
        self.position = position


class TapeExhaustedError(BfreeflowError):
    """The finite tape of a skew state has no symbols left to consume."""


class LengthCapError(BfreeflowError):
    def __init__(self, length: int, cap: int):
        super().__init__(f"length {length} exceeds enumeration cap {cap}")
        self.length = length
        self.cap = cap


class BadOmissionCountError(BfreeflowError):
    def __init__(self, index: int, count: int, modulus: int):
        super().__init__(
            f"omission count {count} for modulus {modulus} (index {index}) "
            f"is outside 1..{modulus - 1}"
        )


class WordTooShortError(BfreeflowError):
    def __init__(self, length: int, needed: int):
        super().__init__(f"word of length {length} too short, need >= {needed}")
