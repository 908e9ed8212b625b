"""Exception hierarchy shared by every germmult module."""

from __future__ import annotations


class GermMultError(Exception):
    """Base class for all errors raised by germmult."""


# -- polynomial kernel -------------------------------------------------------


class ZeroPolynomial(GermMultError, ValueError):
    pass


class ZeroDirection(GermMultError, ValueError):
    pass


class RootAtEndpoint(GermMultError, ValueError):
    """A Sturm interval endpoint is itself a root; the caller perturbs it."""

    def __init__(self, endpoint):
        super().__init__(f"polynomial vanishes at interval endpoint {endpoint}")
        self.endpoint = endpoint


class NotSquareFree(GermMultError, ValueError):
    pass


class NonConvergence(GermMultError, ArithmeticError):
    pass


class ParseError(GermMultError, SyntaxError):
    pass


class UnknownVariable(ParseError):
    pass


class UnsupportedFunction(ParseError):
    pass


# -- germs and maps ----------------------------------------------------------


class SchemaError(GermMultError, ValueError):
    pass


class InvariantViolation(GermMultError, ValueError):
    pass


class AlreadyComplex(GermMultError, ValueError):
    pass


class EvaluationDomainError(GermMultError, ArithmeticError):
    pass


class NonPrimitive(GermMultError, ValueError):
    def __init__(self, gcd: int):
        super().__init__(f"exponents share the factor {gcd}; substitute t -> t^(1/{gcd})")
        self.gcd = gcd


class EmptyParametrization(GermMultError, ValueError):
    pass


# -- cones and engines -------------------------------------------------------


class NotGeneric(GermMultError, ValueError):
    """The kernel direction meets the tangent cone."""

    def __init__(self, direction, value=0):
        super().__init__(f"initial form vanishes at {tuple(str(c) for c in direction)}")
        self.direction = tuple(direction)
        self.value = value


class AmbiguousMembership(GermMultError, ValueError):
    def __init__(self, indices):
        super().__init__(f"direction lies on several cone components {list(indices)}")
        self.indices = tuple(indices)


class Unstable(GermMultError, ArithmeticError):
    """No agreement run over the stability schedule."""

    def __init__(self, message, counts=()):
        super().__init__(message)
        self.counts = tuple(counts)


class EmptyIntersection(GermMultError, ValueError):
    pass


class ScreenFailed(GermMultError, ValueError):
    pass


class ComponentSplitSuspected(GermMultError, ValueError):
    def __init__(self, component, witnesses):
        super().__init__(f"parity varies along cone component {component}")
        self.component = component
        self.witnesses = witnesses


class NonGenericFiber(GermMultError, ValueError):
    pass


class Disagreement(GermMultError, ArithmeticError):
    pass
