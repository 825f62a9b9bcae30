"""Exception hierarchy for the rotframe package.

Every failure mode that carries a documented contract gets its own class so
callers (and the CLI exit-code mapping) can distinguish configuration
problems, numerical-degeneracy aborts, and verification failures.
"""


class RotframeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RotframeError):
    """Invalid run configuration.  Carries a list of (path, message) pairs."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [("", diagnostics)]
        self.diagnostics = list(diagnostics)
        lines = [f"{path}: {msg}" if path else msg for path, msg in self.diagnostics]
        super().__init__("; ".join(lines))


class SingularConfigurationError(RotframeError):
    """The kernel matrix P(x) failed its positive-definite factorization."""

    def __init__(self, x):
        self.x = x
        super().__init__(f"kernel matrix is not positive definite at x = {x!r}")


class PoleConfigurationError(RotframeError):
    """A Jost tail integral hit a vanishing denominator (bound-state pole)."""


class TruncationDomainError(RotframeError):
    """Grid too narrow: boundary amplitude is not negligible."""


class QuadratureConfigError(RotframeError):
    """Grid unsuitable for composite Simpson (needs >= 3 points, odd count)."""


class NormalizationError(RotframeError):
    """A state that must be normalized is not."""


class ResolutionError(RotframeError):
    """A propagator detected unacceptable drift; caller must refine steps."""


class NonCyclicEvolutionError(RotframeError):
    """Return fidelity after one period fell below tolerance."""


class BoundaryLeakError(RotframeError):
    """Grid propagation leaked amplitude into the Dirichlet boundary."""


class DegenerateFieldError(RotframeError):
    """Effective field magnitude vanished where a finite one is required."""


class GridMismatchError(RotframeError):
    """Two fields that must share a grid do not."""
