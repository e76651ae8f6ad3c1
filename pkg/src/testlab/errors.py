"""Exception hierarchy. Contract violations on inputs also subclass ValueError."""


class TestlabError(Exception):
    """Base class for every error raised by this package."""


class InputError(TestlabError, ValueError):
    """An argument or input file violates its contract."""


class DistributionError(InputError):
    """Malformed distribution: bad probabilities, duplicate labels, ..."""


class UnknownSymbolError(DistributionError):
    """A symbol is not part of the declared alphabet."""


class AlphabetMismatchError(DistributionError):
    """Two distributions that must share an alphabet do not."""


class UnorderedAlphabetError(DistributionError):
    """The requested tail needs magnitudes the alphabet does not carry."""


class ImpossibleObservationError(TestlabError):
    """Observed data has probability zero under both hypotheses at once."""


class ZeroEffectError(InputError):
    """A decision rule is degenerate because the two means coincide."""


class PowerSpecError(InputError):
    """A power specification does not have exactly one unknown, or a known
    field is out of range."""


class NoSolutionError(TestlabError):
    """The three known power-analysis quantities admit no solution."""


class InfiniteDivergenceError(TestlabError):
    """An operation requires a finite divergence but the supports differ."""


class EmptySampleError(InputError):
    """The operation needs at least one observation."""


class ScenarioError(InputError):
    """A scenario file is missing keys or holds values the paradigm rejects."""
