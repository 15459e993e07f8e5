"""Correlated binary source models."""

from ._bincorr import *  # noqa: F401,F403
from ._bincorr import (  # noqa: F401
    CapExceeded,
    DimensionMismatch,
    Error,
    InvalidSpec,
    IoError,
    ModelSpec,
    Unsupported,
)
