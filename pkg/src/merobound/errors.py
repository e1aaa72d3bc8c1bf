"""Exception hierarchy shared by all modules."""


class MeroboundError(Exception):
    """Base class for every structured failure raised by the package."""


class VariableMismatch(MeroboundError, ValueError):
    def __init__(self, left, right):
        super().__init__(f"incompatible variable sets {left!r} and {right!r}")
        self.left = tuple(left)
        self.right = tuple(right)


class NotSolvable(MeroboundError, ValueError):
    """The implicit-function step has a vanishing linear coefficient."""


class NonRealCoefficients(MeroboundError, ValueError):
    pass


class NotCoprime(MeroboundError, ValueError):
    pass


class XFactorError(MeroboundError, ValueError):
    def __init__(self, multiplicity):
        super().__init__(f"polynomial is divisible by x^{multiplicity}")
        self.multiplicity = multiplicity


class CapExceeded(MeroboundError):
    """A configured degree, depth, precision or step cap was hit.

    ``partial`` carries whatever was built before the cap (cluster list,
    blow-up tree, ...), ``cap`` names the exhausted resource.
    """

    def __init__(self, message, *, cap=None, partial=None):
        super().__init__(message)
        self.cap = cap
        self.partial = partial


class MalformedCertificate(MeroboundError, ValueError):
    pass


class NonRationalCenter(MeroboundError):
    """A blow-up center is not a Q(i)-point, so exact tracking stops."""


class ParseError(MeroboundError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.reason = message
