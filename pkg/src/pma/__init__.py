"""Private membership aggregation over small prime fields.

A user asks M parties (N databases each) how many of them hold a given
universe element without revealing the element, without learning which
parties hold it, and, in the symmetric variants, without learning anything
else about their contents. Queries hide the target coordinate behind noise
weighted by powers of per-database evaluation points, so the wanted value
lands in the constant coefficient of a small polynomial that one exact
linear solve recovers.

The package also ships an audit module that proves the privacy claims at
desk scale by exhaustive enumeration with exact rational probabilities,
and a harness that accounts every transmitted symbol against the schemes'
closed-form communication costs.
"""

from . import audit, cli, field, harness, model, pma1, spma1, spma2, transcript
from .errors import AuditInfeasibleError, IntegrityError, ParameterError

__version__ = "0.1.0"

__all__ = [
    "audit", "cli", "field", "harness", "model", "pma1", "spma1", "spma2",
    "transcript", "AuditInfeasibleError", "IntegrityError", "ParameterError",
    "__version__",
]
