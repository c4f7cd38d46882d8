"""Exception hierarchy shared by all modules."""


class HyperaffineError(Exception):
    """Base class for every error raised by this package."""


class RingSpecError(HyperaffineError, ValueError):
    pass


class NotBoolean(HyperaffineError, ValueError):
    pass


class CarrierTooLarge(HyperaffineError, ValueError):
    pass


class IndexOutOfRange(HyperaffineError, IndexError):
    pass


class ArityMismatch(HyperaffineError, ValueError):
    pass


class TheoryMismatch(HyperaffineError, ValueError):
    pass


class NotInTheory(HyperaffineError, ValueError):
    """A coefficient vector violates the membership constraint of a theory."""


class EnumerationTooLarge(HyperaffineError, ValueError):
    pass


class NotPartitionOfUnity(HyperaffineError, ValueError):
    pass


class SumNotOne(HyperaffineError, ValueError):
    pass


class DegenerateTheory(HyperaffineError, ValueError):
    pass


class NotBijective(HyperaffineError):
    pass


class NotHomomorphic(HyperaffineError):
    pass


class EmptyStalk(HyperaffineError, ValueError):
    pass


class NotABSet(HyperaffineError):
    pass


class DecompositionFailed(HyperaffineError):
    pass


class SuiteFailed(HyperaffineError):
    def __init__(self, axiom, detail=""):
        self.axiom = axiom
        self.detail = detail
        super().__init__(f"{axiom} fails" + (f": {detail}" if detail else ""))


class ModelFormatError(HyperaffineError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ParseError(HyperaffineError, ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownAtom(ParseError):
    pass


class VarOutOfRange(ParseError):
    pass
