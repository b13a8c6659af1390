"""Exception hierarchy shared by all modules.

Every domain error derives from :class:`HypertelError`, which the CLI maps to
exit code 1 with a JSON description on stderr.
"""


class HypertelError(Exception):
    """Base class for all domain errors."""


class InvalidTerm(HypertelError, ValueError):
    pass


class NegativeCoefficient(InvalidTerm):
    pass


class ZeroPolynomial(InvalidTerm):
    pass


class NonpositiveBase(InvalidTerm):
    pass


class InvalidOmega(HypertelError, ValueError):
    pass


class NegativeExponent(HypertelError, ValueError):
    pass


class NonIntegralError(HypertelError, ValueError):
    """A binomial-basis polynomial has no integer standard-basis expansion."""


class HypothesisViolation(HypertelError, ValueError):
    pass


class DegenerateTerm(HypertelError):
    """Every kernel vector has a zero telescoper part (h is likely rational)."""


class InternalInconsistency(HypertelError, RuntimeError):
    pass


class ZeroOperator(HypertelError, ValueError):
    pass


class OrderTooSmall(HypertelError, ValueError):
    pass


class OmegaTooSmall(HypertelError, ValueError):
    pass


class UnluckyPrime(HypertelError):
    def __init__(self, prime, message="unlucky prime"):
        super().__init__(f"{message}: {prime}")
        self.prime = prime


class NonCoprimeModuli(HypertelError, ValueError):
    pass


class ReconstructionFailed(HypertelError, ArithmeticError):
    pass


class SingularTerm(HypertelError):
    def __init__(self, n, k):
        super().__init__(f"summand is undefined at (n, k) = ({n}, {k})")
        self.n = n
        self.k = k


class WindowViolation(HypertelError):
    pass


class RankDeficient(HypertelError, ArithmeticError):
    pass


class InsufficientData(HypertelError, ValueError):
    pass
