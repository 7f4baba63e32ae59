"""Central differences with Richardson extrapolation."""
import numpy as np

from ..errors import DomainError, StepUnderflow

_EPS = np.finfo(float).eps


def _richardson(F, T, h):
    """Depth-3 ladder with step ratio 2; returns (estimate, error, max|F|)."""
    hs = [h, h / 2, h / 4]
    d, fmax = [], 0.0
    for hk in hs:
        fp, fm = float(F(T + hk)), float(F(T - hk))
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise DomainError(f"function not finite near T={T} (step {hk})")
        fmax = max(fmax, abs(fp), abs(fm))
        d.append((fp - fm) / (2 * hk))
    r1 = (4 * d[1] - d[0]) / 3
    r2 = (4 * d[2] - d[1]) / 3
    r = (16 * r2 - r1) / 15
    roundoff = 10 * _EPS * fmax / hs[-1]
    return r, abs(r - r2) + roundoff


def derivative_wrt_parameter(F, T, h0=None, floor=1e-6, rel_tol=None, max_halvings=12):
    """Derivative of ``F`` at ``T``.

    Parameters
    ----------
    F : callable
        Smooth scalar function of one real argument.
    T : float
        Evaluation point.
    h0 : float, optional
        Initial step, default ``max(T/20, floor)``.  Requires ``T - 2*h0 > 0``
        since entropy sweeps only make sense at positive temperature.
    rel_tol : float, optional
        If given, the step is halved until the error estimate drops below
        ``rel_tol*|value|``; :class:`StepUnderflow` is raised if the step
        reaches ``floor`` (or double resolution of ``T``) first.

    Returns
    -------
    (value, error_estimate)
    """
    if h0 is None:
        h0 = max(T / 20.0, floor)
    if not h0 > 0:
        raise ValueError("h0 must be positive")
    if not T - 2 * h0 > 0:
        raise DomainError("need T - 2*h0 > 0")
    h = h0
    resolution = max(floor, 64 * _EPS * abs(T))
    for _ in range(max_halvings + 1):
        val, err = _richardson(F, T, h)
        if rel_tol is None or err <= rel_tol * abs(val):
            return val, err
        h /= 2
        if h / 4 < resolution:
            break
    raise StepUnderflow(f"derivative at T={T} did not reach rel_tol={rel_tol}; "
                        f"last estimate {val:.6g} +/- {err:.2g}")
