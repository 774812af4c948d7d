"""Exception hierarchy shared by every module."""


class RenyiMaxentError(Exception):
    """Base class for all package errors."""


class DomainError(RenyiMaxentError, ValueError):
    """An argument lies outside the domain of a function."""


class AlphaRangeError(DomainError):
    """The order alpha is outside the validity window for the requested object."""

    def __init__(self, alpha, dimension, window):
        self.alpha = alpha
        self.dimension = dimension
        self.window = window
        super().__init__(f"alpha out of range: alpha={alpha!r}, d={dimension}; valid window is {window}")


class MomentDivergenceError(DomainError):
    """A closed-form radial integral does not converge for the given exponents."""


class NonIntegrableTailError(DomainError):
    """A power-law tail is too heavy for the requested moment."""

    def __init__(self, moment, decay_exponent, dimension):
        self.moment = moment
        self.decay_exponent = decay_exponent
        self.dimension = dimension
        super().__init__(
            f"non-integrable tail: moment of order {moment} needs decay exponent > "
            f"{dimension + moment} in d={dimension}, got {decay_exponent!r}"
        )


class EntropyUndefinedError(DomainError):
    """The integral of f**alpha diverges on the grid's tail envelope."""


class TailDominanceError(DomainError):
    """A perturbation cannot be kept below c * f_hat on the whole line."""


class EvaluationError(RenyiMaxentError, ArithmeticError):
    """An integrand returned a non-finite value at a quadrature node."""

    def __init__(self, index, node, value):
        self.index = index
        self.node = node
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at node {index} (r={node!r})")


class BracketError(RenyiMaxentError, ValueError):
    """No sign change of the target function inside the bracket."""


class NotConvergedError(RenyiMaxentError):
    """An iteration hit its cap before meeting the tolerance."""

    def __init__(self, message, last_iterate=None, gap=None):
        self.last_iterate = last_iterate
        self.gap = gap
        super().__init__(f"not converged: {message} (gap={gap!r})")
