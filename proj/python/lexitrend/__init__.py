"""Python access to the lexitrend matcher, statistics and pipeline stages.

Pipeline functions take the same settings as the CLI config file, as a
dict of strings keyed by option name (``events``, ``dict``, ``out`` ...).
"""

from ._lexitrend import (
    ConfigError,
    DataError,
    analyze,
    benjamini_hochberg,
    best_lag,
    config_hash,
    cross_correlation,
    lowercase,
    match,
    pelt,
    plotdata,
    pmi,
    scan,
    significance,
    trending_months,
)

__all__ = [
    "ConfigError",
    "DataError",
    "analyze",
    "benjamini_hochberg",
    "best_lag",
    "config_hash",
    "cross_correlation",
    "lowercase",
    "match",
    "pelt",
    "plotdata",
    "pmi",
    "scan",
    "significance",
    "trending_months",
]
