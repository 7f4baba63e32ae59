"""Matsubara-type sums and the Abel-Plana sum-minus-integral difference."""
import numpy as np

from ..errors import DomainError, NonConvergence
from .quadrature import integrate_batch_semi_infinite


def _call_terms(term, ls):
    """Evaluate ``term`` on an integer array, vectorised when the callable allows it."""
    try:
        out = np.asarray(term(ls), dtype=float)
        if out.shape == ls.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(term(int(l))) for l in ls])


def _geometric_tail(t):
    """Tail estimate from the last three terms assuming geometric decay.

    Returns ``inf`` when the terms are not (yet) decaying monotonically.
    """
    t0, t1, t2 = (abs(x) for x in t[-3:])
    if t2 == 0.0 and t1 == 0.0:
        return 0.0
    if t1 == 0.0 or t0 == 0.0:
        return np.inf
    r = max(t2 / t1, t1 / t0)
    if not r < 1.0:
        return np.inf
    return t2 * r / (1.0 - r)


def _euler_maclaurin_tail(term, last, m, rel_tol, abs_tol):
    """``sum_{l > m} term(l)`` for a smooth, decaying term; ``last`` ends with term(m).

    Uses ``int_m^inf f - f(m)/2 - f'(m)/12`` with a second-order backward
    difference for ``f'(m)``.  The neglected third-derivative term is tiny
    whenever the terms change slowly from one index to the next, which is
    exactly when a tail is worth using.
    """
    f2, f1, f0 = last[-3:]
    deriv = (3 * f0 - 4 * f1 + f2) / 2

    def f(x, _):
        return np.asarray(term(m + x), dtype=float)

    res = integrate_batch_semi_infinite(f, 0.0, float(max(m, 1)), rtol=rel_tol, atol=abs_tol,
                                        max_intervals=4000)
    return float(res.values[0] - f0 / 2 - deriv / 12)


def matsubara_sum(term, rel_tol=1e-10, l_max=10_000_000, abs_tol=0.0, first_chunk=16,
                  max_chunk=4096, start=0, smooth_tail_after=None):
    """Primed sum ``term(0)/2 + sum_{l>=1} term(l)``.

    With ``start > 0`` the plain sum ``sum_{l>=start} term(l)`` is returned
    instead (no halving), which is how the l = 0 term is split off.

    ``term`` may accept an integer array (preferred, much faster) or a single
    integer.  Terms are requested in growing chunks; summation stops once the
    geometric tail estimate of the last three terms falls below
    ``max(abs_tol, rel_tol*|partial sum|)``.  The returned value is the
    truncated sum; the tail estimate is not added.

    ``smooth_tail_after=N``: if the sum has not converged after ``N`` terms,
    the remainder is taken from the Euler-Maclaurin formula instead.  This
    requires ``term`` to accept non-integer arguments and to be a smooth
    function of them (true for spectra sampled at Matsubara frequencies);
    it pays off at low temperature where thousands of terms contribute.

    >>> round(matsubara_sum(lambda l: np.exp(-l)), 6)
    1.081977
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    total = 0.0
    last = np.empty(0)
    first = start
    chunk = first_chunk
    while start <= l_max:
        stop = min(start + chunk, l_max + 1)
        ls = np.arange(start, stop)
        t = _call_terms(term, ls)
        if not np.all(np.isfinite(t)):
            bad = int(ls[~np.isfinite(t)][0])
            raise NonConvergence("non-finite Matsubara term", estimate=total, node={"l": bad})
        last = np.concatenate([last, t])[-3:]
        if start == 0 == first:
            t = t.copy()
            t[0] *= 0.5
        total += float(np.sum(t))
        if len(last) >= 3:
            tail = _geometric_tail(last)
            if tail <= max(abs_tol, rel_tol * abs(total)):
                return total
            if smooth_tail_after is not None and stop - first >= smooth_tail_after:
                return total + _euler_maclaurin_tail(term, last, stop - 1, rel_tol,
                                                     max(abs_tol, rel_tol * abs(total)))
        start = stop
        chunk = min(2 * chunk, max_chunk)
    raise NonConvergence("Matsubara sum did not converge", estimate=total,
                         error=float(_geometric_tail(last)), node={"l_max": l_max})


def _complex_eval(F, z):
    try:
        out = np.asarray(F(z), dtype=complex)
        if out.shape == z.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([complex(F(complex(v))) for v in z])


def abel_plana_difference(F, rel_tol=1e-10, theta=np.pi / 4, check_decay=True, abs_tol=0.0,
                          max_intervals=2000, subtracted=False):
    """Sum minus integral, ``sum' F(l) - int_0^inf F(t) dt``, from contour values.

    ``F`` must be analytic in the right half-plane and real on the real axis.
    The textbook representation integrates along the imaginary axis,
    ``i int [F(it) - F(-it)]/(e^{2 pi t} - 1) dt``.  Here the contour is the
    ray ``z = t e^{i theta}`` (default 45 degrees), which gives the same value
    for analytic ``F`` but avoids branch points and poles that physical
    spectra place on the imaginary axis:

        2 Re int_0^inf (F(z) - F(0)) e^{i theta} / (e^{-2 pi i z} - 1) dt

    (the ``F(0)`` subtraction cancels the constant that the rotated kernel
    would otherwise leave behind; ``theta = pi/2`` recovers the textbook form).

    ``F`` should accept complex arrays; a scalar-only callable also works.
    With ``subtracted=True`` the callable already returns ``F(z) - F(0)``,
    which lets callers keep full relative accuracy in that difference.
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    if not 0 < theta <= np.pi / 2:
        raise ValueError("theta must lie in (0, pi/2]")
    phase = np.exp(1j * theta)
    f0 = 0.0 if subtracted else _complex_eval(F, np.zeros(1, dtype=complex))[0].real
    if check_decay and not subtracted:
        probe = _complex_eval(F, np.array([0.0, 1.0, 10.0, 100.0], dtype=complex))
        if not np.all(np.isfinite(probe)):
            raise DomainError("F is not finite on the sampled contour")
        ref = max(abs(f0), np.max(np.abs(probe[:2])))
        if ref > 0 and abs(probe[-1]) > 1e-2 * ref:
            raise DomainError("F does not decay; the sum and integral diverge separately")

    def integrand(t, _):
        z = t * phase
        fz = _complex_eval(F, z)
        if not np.all(np.isfinite(fz)):
            raise DomainError("F returned non-finite values on the contour")
        w = np.exp(2j * np.pi * z)
        kern = phase * w / (-np.expm1(2j * np.pi * z))
        # |w| underflows long before the kernel needs care
        return ((fz - f0) * kern).real

    scale = 1.0 / (2 * np.pi * np.sin(theta))
    res = integrate_batch_semi_infinite(integrand, 0.0, scale, rtol=rel_tol, atol=abs_tol,
                                        max_intervals=max_intervals)
    return 2.0 * float(res.values[0])
