"""Power-law (optionally times a logarithm) fits on log-log axes."""
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateData


@dataclass(frozen=True)
class ScalingFit:
    """Result of :func:`fit_scaling`.

    The model is ``|y| = prefactor * T**exponent`` or, when ``log_factor`` is
    set, ``|y| = prefactor * T**exponent * |ln(T/log_scale)|``.
    ``rms_residual`` is measured in ``ln|y|``.
    """
    exponent: float
    log_factor: bool
    prefactor: float
    rms_residual: float
    log_scale: float = 1.0
    exponent_stderr: float = 0.0

    def __post_init__(self):
        if not self.rms_residual >= 0:
            raise ValueError("rms_residual must be non-negative")

    def predict(self, T):
        T = np.asarray(T, dtype=float)
        y = self.prefactor * T**self.exponent
        if self.log_factor:
            y = y * np.abs(np.log(T / self.log_scale))
        return y


def _linear_fit(x, z):
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, z, rcond=None)
    resid = z - A @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    dof = max(len(x) - 2, 1)
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return coef, rms, float(np.sqrt(max(cov[0, 0], 0.0)))


def fit_scaling(points, try_log=True, log_scale=1.0, tie_margin=0.05, min_points=5):
    """Fit ``ln|y|`` against ``ln T``.

    Parameters
    ----------
    points : sequence of (T, y)
        At least five points, ``T > 0``, all ``y`` of one sign and nonzero.
    try_log : bool
        Also try the model with an extra ``ln|ln(T/log_scale)|`` term.
    log_scale : float
        Scale inside the logarithmic factor.  Physical abscissae usually carry
        units, so the natural argument of the logarithm is ``T/T_scale``
        rather than ``T`` itself.
    tie_margin : float
        If the two rms residuals differ by less than this fraction, the plain
        power law wins.
    min_points : int
        Smallest accepted number of points (at least 3).  Lowering it from
        the default only makes sense for quick reduced-grid runs.

    Raises
    ------
    DegenerateData
        Fewer than ``min_points`` points, non-positive abscissae, zero or sign-changing
        ordinates.
    """
    min_points = max(int(min_points), 3)
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < min_points:
        raise DegenerateData(f"need at least {min_points} (T, y) points")
    T, y = pts[:, 0], pts[:, 1]
    if np.any(T <= 0) or not np.all(np.isfinite(pts)):
        raise DegenerateData("abscissae must be positive and finite")
    if not (np.all(y > 0) or np.all(y < 0)):
        raise DegenerateData("ordinates change sign or vanish")
    if len(np.unique(T)) < 2:
        raise DegenerateData("abscissae are all equal")
    x, z = np.log(T), np.log(np.abs(y))
    (p, c), rms, se = _linear_fit(x, z)
    best = ScalingFit(float(p), False, float(np.exp(c)), rms, log_scale, se)
    if try_log:
        ll = np.abs(np.log(T / log_scale))
        if np.all(ll > 1e-3):
            (pl, cl), rms_l, se_l = _linear_fit(x, z - np.log(ll))
            tie = abs(rms - rms_l) < tie_margin * max(rms, rms_l) or max(rms, rms_l) < 1e-12
            if rms_l < rms and not tie:
                best = ScalingFit(float(pl), True, float(np.exp(cl)), rms_l, log_scale, se_l)
    return best
