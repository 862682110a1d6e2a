"""Exception types shared across the package.

The CLI maps these onto exit codes: `ValidationError` (and subclasses)
exit with 1, `ContractViolation` with 2.
"""


class ValidationError(ValueError):
    """Bad input: malformed loop, out-of-range parameter, unusable config."""


class ConfigError(ValidationError):
    """Experiment config failed to validate; carries per-field messages."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config: " + "; ".join(self.problems))


class SearchBoundExceeded(ValidationError):
    """First-return scan exhausted its bound.

    Signals a rotation fraction that is rational, or too close to a
    rational, for the window to be reached within the search horizon.
    """


class NoHitsError(ValidationError):
    """The orbit never entered the window within the iteration budget."""


class ContractViolation(RuntimeError):
    """A numerical invariant that must hold at runtime failed."""
