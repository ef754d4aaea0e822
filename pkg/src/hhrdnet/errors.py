"""Exception types shared across the package."""


class HHError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(HHError, ValueError):
    """A parameter, option, or configuration file is invalid."""


class DomainError(HHError, ValueError):
    """An input value lies outside the domain of an operation."""


class DegenerateRateError(DomainError):
    """Gate kinetics degenerate: alpha + beta is not strictly positive."""


class BlowUpError(HHError, RuntimeError):
    """The simulated state left the trusted range or became non-finite.

    Attributes
    ----------
    t : float or None
        Simulation time at which the offending state was detected.
    neuron, node : int or None
        Indices locating the offending value.
    component : str or None
        One of ``"V"``, ``"n"``, ``"m"``, ``"h"``.
    value : float or None
        The offending value itself.
    """

    def __init__(self, message, *, t=None, neuron=None, node=None,
                 component=None, value=None):
        super().__init__(message)
        self.t = t
        self.neuron = neuron
        self.node = node
        self.component = component
        self.value = value


class BracketError(HHError, RuntimeError):
    """A bisection bracket is invalid or collapsed onto an unexpected label.

    Attributes
    ----------
    labels : dict
        Maps each offending drive amplitude to the label that was found.
    """

    def __init__(self, message, *, labels=None):
        super().__init__(message)
        self.labels = dict(labels or {})
