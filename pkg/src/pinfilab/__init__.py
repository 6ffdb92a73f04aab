"""Laboratory for dissipative-asset automated market makers.

Submodules: :mod:`~pinfilab.params` (parameters and normalization),
:mod:`~pinfilab.pool` (constant-product engine), :mod:`~pinfilab.analytics`
(closed forms), :mod:`~pinfilab.simulation` (threshold-agent simulator),
:mod:`~pinfilab.phase` (zone maps) and :mod:`~pinfilab.cli`.
"""
from ._kernel import BACKEND as KERNEL_BACKEND
from .params import MarketParams, NormalizedParams, normalize, validate

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "MarketParams", "NormalizedParams", "normalize", "validate"]
