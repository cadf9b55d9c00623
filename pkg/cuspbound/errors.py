class CuspboundError(Exception):
    """Base class of every error raised by the library."""
    pass


class DomainError(CuspboundError, ValueError):
    """An input lies outside the class of domains, exponents or points the formulas hold for."""
    pass


class NumericalError(CuspboundError):
    """A computation could not produce a finite, trustworthy number."""
    pass


class DivergentIntegralError(NumericalError):
    def __init__(self, name, exponent):
        self.name = name
        self.exponent = exponent
        super().__init__(f'{name} diverges : the integrand behaves like x_n^{exponent:.6g} near the tip (needs > -1).')


class UnboundedConstantError(NumericalError):
    pass


class InvalidVariantError(NumericalError):
    """The radicand of a distortion bound is negative, so the bound does not exist."""
    def __init__(self, variant, radicand):
        self.variant = variant
        self.radicand = radicand
        super().__init__(f'Radicand of the {variant} distortion bound is negative ({radicand:.6g}).')


class PrecisionError(NumericalError):
    def __init__(self, name, estimates, tol):
        self.name = name
        self.estimates = tuple(estimates)
        self.tol = tol
        last, before = self.estimates[-1], self.estimates[-2]
        super().__init__(f'{name} did not reach a relative change of {tol:g} : last estimates {before!r} and {last!r}.')


class NonConvergenceError(NumericalError):
    def __init__(self, message, residual=None):
        self.residual = residual
        if residual is not None:
            message = f'{message} (residual {residual:.3e})'
        super().__init__(message)


class NoBoundAvailable(NumericalError):
    """No exponent pair of the search leaves a nonempty admissible interval for a."""
    pass
