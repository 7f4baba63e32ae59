"""Numerical building blocks: quadrature, series, derivatives, fits."""
from .quadrature import (QuadratureResult, integrate_batch, integrate_batch_semi_infinite,
                         integrate_semi_infinite)
from .summation import abel_plana_difference, matsubara_sum
from .differentiate import derivative_wrt_parameter
from .fitting import ScalingFit, fit_scaling

__all__ = [
    "QuadratureResult", "integrate_batch", "integrate_batch_semi_infinite",
    "integrate_semi_infinite", "abel_plana_difference", "matsubara_sum",
    "derivative_wrt_parameter", "ScalingFit", "fit_scaling",
]
