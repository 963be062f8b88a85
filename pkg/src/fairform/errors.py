"""Exception types shared across the package."""


class FairformError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FairformError):
    """Invalid or missing configuration (thresholds, synth specs, run options)."""


class SchemaError(FairformError):
    """An input file does not match its declared schema (bad header, bad type)."""


class IntegrityError(FairformError):
    """Cross-record consistency violation: duplicate ids, unresolvable member
    ids, or candidates that should have been filtered reaching a later stage."""


class BudgetExceededError(FairformError):
    """An exhaustive enumeration would exceed its configured budget."""
