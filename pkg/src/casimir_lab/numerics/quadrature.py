"""Adaptive Gauss-Kronrod quadrature, vectorised over many integrals at once.

Every physics quantity in the package is a nest of one-dimensional integrals
(frequency, wave vector, Fermi-weighted loop variable).  Evaluating them one
at a time from Python is far too slow, so the adaptive driver here works on a
*batch*: each interval carries the index of the integral ("owner") it belongs
to and all pending intervals are evaluated in a single vectorised call.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import NonConvergence

# 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be positive")


@dataclass
class BatchResult:
    """Values and error estimates of a batch of integrals.

    ``values`` has shape ``(n_owners,)`` for scalar integrands and
    ``(n_owners, m)`` for ``m``-component integrands.
    """
    values: np.ndarray
    errors: np.ndarray
    evaluations: np.ndarray
    converged: np.ndarray


def _rule(f, lo, hi, owner):
    """Apply the 15-point pair on every interval; returns value, error, resabs."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = (mid[:, None] + half[:, None] * NODES[None, :]).ravel()
    fx = np.asarray(f(x, np.repeat(owner, 15)))
    scalar = fx.ndim == 1
    fx = fx.reshape(len(lo), 15, -1)
    h = half[:, None]
    resk = h * np.einsum("j,ijc->ic", KRONROD_WEIGHTS, fx)
    resg = h * np.einsum("j,ijc->ic", GAUSS_WEIGHTS, fx)
    absf = np.abs(fx)
    resabs = np.abs(h) * np.einsum("j,ijc->ic", KRONROD_WEIGHTS, absf)
    mean = resk / np.where(h == 0, 1.0, 2.0 * h)
    resasc = np.abs(h) * np.einsum("j,ijc->ic", KRONROD_WEIGHTS, np.abs(fx - mean[:, None, :]))
    err = np.abs(resk - resg)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    if not np.all(np.isfinite(resk)):
        bad = np.unique(owner[~np.all(np.isfinite(resk), axis=1)])
        raise NonConvergence("integrand returned non-finite values", node={"owners": bad[:5].tolist()})
    return resk, err, resabs, scalar


def _owner_sum(owner, data, n_owners):
    out = np.zeros((n_owners, data.shape[1]), dtype=data.dtype)
    np.add.at(out, owner, data)
    return out


def integrate_batch(f, lo, hi, owner=None, n_owners=None, rtol=1e-10, atol=0.0,
                    max_intervals=4000, raise_on_failure=True):
    """Integrate many functions over finite intervals simultaneously.

    Parameters
    ----------
    f : callable
        ``f(x, owner)`` evaluated on flat arrays; returns values of shape ``(n,)``
        or ``(n, m)``, real or complex.
    lo, hi : array_like
        Initial intervals.  Several intervals may share an owner, which is how
        breakpoints are passed.
    owner : array_like of int, optional
        Integral index of each initial interval (default: one integral each).
    rtol, atol : float
        Per-component target ``err <= max(atol, rtol*|value|)``.
    max_intervals : int
        Subdivision limit per integral.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    owner = np.arange(len(lo)) if owner is None else np.asarray(owner, dtype=np.intp)
    if n_owners is None:
        n_owners = int(owner.max()) + 1 if len(owner) else 0
    val, err, rabs, scalar = _rule(f, lo, hi, owner)
    n_eval = np.bincount(owner, minlength=n_owners) * 15
    done = np.zeros(n_owners, dtype=bool)
    while True:
        tot = _owner_sum(owner, val, n_owners)
        tot_err = _owner_sum(owner, err, n_owners)
        tot_abs = _owner_sum(owner, rabs, n_owners)
        tol = np.maximum(np.maximum(atol, rtol * np.abs(tot)), 100.0 * _EPS * tot_abs)
        ratio = tot_err / np.where(tol > 0, tol, np.inf)
        ratio[(tol == 0) & (tot_err == 0)] = 0.0
        done = np.all((tot_err <= tol), axis=1)
        counts = np.bincount(owner, minlength=n_owners)
        if done.all():
            break
        over = (~done) & (counts >= max_intervals)
        if over.any():
            if raise_on_failure:
                i = int(np.flatnonzero(over)[0])
                raise NonConvergence("subdivision limit reached",
                                     estimate=_squeeze(tot, scalar)[i],
                                     error=_squeeze(tot_err, scalar)[i],
                                     node={"integral": i})
            done |= over
            if done.all():
                break
        share = err / np.where(tol[owner] > 0, tol[owner], np.inf)
        share = np.max(share, axis=1) * counts[owner]
        split = (~done[owner]) & (share > 0.5)
        if not split.any():
            # tolerance met within rounding; nothing left worth bisecting
            break
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        new_owner = np.concatenate([owner[split], owner[split]])
        v2, e2, a2, _ = _rule(f, new_lo, new_hi, new_owner)
        n_eval += np.bincount(new_owner, minlength=n_owners) * 15
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        owner = np.concatenate([owner[keep], new_owner])
        val = np.concatenate([val[keep], v2])
        err = np.concatenate([err[keep], e2])
        rabs = np.concatenate([rabs[keep], a2])
    tot = _owner_sum(owner, val, n_owners)
    tot_err = _owner_sum(owner, err, n_owners)
    return BatchResult(_squeeze(tot, scalar), _squeeze(tot_err, scalar), n_eval, done)


def _squeeze(a, scalar):
    return a[:, 0] if scalar else a


def semi_infinite_map(lower, scale):
    """Return ``(to_x, to_s)`` for the map x = lower + scale*s/(1-s), s in [0, 1)."""
    def to_x(s):
        return lower + scale * s / (1.0 - s)

    def to_s(x):
        d = x - lower
        return d / (d + scale)

    return to_x, to_s


def integrate_batch_semi_infinite(f, lower, scale, breaks=None, rtol=1e-10, atol=0.0,
                                  max_intervals=4000, raise_on_failure=True):
    """Batch of integrals over [lower_i, inf) on the mapped variable s.

    ``breaks`` is an optional ``(n, p)`` array of interior breakpoints in x
    (NaN entries ignored).  ``f(x, owner)`` as in :func:`integrate_batch`.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    scale = np.broadcast_to(np.asarray(scale, dtype=float), lower.shape)
    n = len(lower)
    if breaks is None:
        s_lo = np.zeros(n)
        s_hi = np.ones(n)
        owner = np.arange(n)
    else:
        b = np.asarray(breaks, dtype=float).reshape(n, -1)
        sb = (b - lower[:, None]) / (b - lower[:, None] + scale[:, None])
        sb = np.where((sb > 0) & (sb < 1), sb, np.nan)
        edges = np.concatenate([np.zeros((n, 1)), np.sort(sb, axis=1), np.ones((n, 1))], axis=1)
        s_lo, s_hi, owner = [], [], []
        for i in range(n):
            e = edges[i][~np.isnan(edges[i])]
            e = np.unique(e)
            s_lo.append(e[:-1])
            s_hi.append(e[1:])
            owner.append(np.full(len(e) - 1, i))
        s_lo, s_hi, owner = map(np.concatenate, (s_lo, s_hi, owner))

    def g(s, own):
        one_minus = 1.0 - s
        x = lower[own] + scale[own] * s / one_minus
        jac = scale[own] / one_minus**2
        fx = np.asarray(f(x, own))
        return fx * (jac if fx.ndim == 1 else jac[:, None])

    return integrate_batch(g, s_lo, s_hi, owner, n, rtol=rtol, atol=atol,
                           max_intervals=max_intervals, raise_on_failure=raise_on_failure)


def _vectorised(f):
    def g(x):
        try:
            y = np.asarray(f(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([f(float(v)) for v in x], dtype=float)
    return g


def integrate_semi_infinite(f, decay_scale=1.0, rel_tol=1e-10, max_intervals=2000):
    """Integrate a real function over [0, inf).

    The integrand should decay at least exponentially beyond ``decay_scale``.
    Raises :class:`NonConvergence` (carrying the best estimate) when the
    subdivision limit is hit.

    >>> round(integrate_semi_infinite(lambda x: x * np.exp(-x)).value, 12)
    1.0
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    if not decay_scale > 0:
        raise ValueError("decay_scale must be positive")
    fv = _vectorised(f)
    res = integrate_batch_semi_infinite(lambda x, _: fv(x), 0.0, decay_scale,
                                        rtol=rel_tol, max_intervals=max_intervals)
    return QuadratureResult(float(res.values[0]), float(res.errors[0]), int(res.evaluations[0]))
