"""Change point localization and inference for dynamic multilayer networks."""

from .tensor_core import (
    TensorSeries,
    frob_norm,
    inner,
    matricize,
    mode_multiply,
    project_tucker,
)

__version__ = "0.1.0"

__all__ = [
    "TensorSeries",
    "frob_norm",
    "inner",
    "matricize",
    "mode_multiply",
    "project_tucker",
    "__version__",
]
