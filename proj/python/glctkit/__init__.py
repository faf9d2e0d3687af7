"""Graph linear canonical transform toolkit."""

from ._core import *  # noqa: F401,F403
from ._core import (
    BasisKind,
    GlctOperator,
    GlctParams,
    Graph,
    NumericalError,
    ParseError,
    ValidationError,
)

__version__ = "0.1.0"
