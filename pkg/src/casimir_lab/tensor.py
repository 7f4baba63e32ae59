"""Polarization tensor of graphene on the imaginary frequency axis.

Conventions
-----------
Inputs are the frequency as an energy ``w = ħξ`` (eV) and the in-plane wave
number ``k`` (1/µm).  The two tensor components are returned divided by ħ:
``pi00`` in 1/µm and ``pi`` in 1/µm³, which is exactly what the reflection
coefficients need (``r_TM = q pi00/(q pi00 + 2k²)``, ``r_TE = -pi/(pi + 2k²q)``).

Shorthand used throughout:

* ``eps = ħ v_F k`` (eV), ``E = sqrt(eps² + w²)``, ``D = gap/E``;
* ``B = E/(2 k_B T)``, ``m = mu/(k_B T)`` and ``uF = 2 mu/E``, the point where
  the zero-temperature occupation of the loop variable ``u`` switches off.

The finite-temperature part is an integral over ``u`` of Fermi factors times a
square-root kernel.  Besides that literal form the module offers the
*thermal excess* ``Π(T) - Π(T=0)``: subtracting the zero-temperature step from
the occupation leaves an integrand localised within a few ``1/B`` of ``uF``,
which is both faster and free of cancellation when the thermal effect is tiny.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.special import expit

from .constants import FERMI_VELOCITY_RATIO, FINE_STRUCTURE, HBAR_C, K_B
from .errors import CaseError, DomainError
from .numerics.quadrature import integrate_batch

_FERMI_CUTOFF = 40.0


@dataclass(frozen=True)
class GrapheneParams:
    """Gap and chemical potential in eV."""
    gap: float = 0.0
    mu: float = 0.0
    vf_ratio: float = FERMI_VELOCITY_RATIO
    alpha: float = FINE_STRUCTURE

    def __post_init__(self):
        if not self.gap >= 0:
            raise DomainError("gap must be >= 0")
        if not self.mu >= 0:
            raise DomainError("chemical potential must be >= 0 (results depend on |mu| only)")
        if not 0 < self.vf_ratio < 1:
            raise DomainError("vf_ratio must lie in (0, 1)")
        if not self.alpha > 0:
            raise DomainError("alpha must be > 0")

    @property
    def doped(self):
        """True when the zero-temperature Fermi level lies inside the band (gap < 2 mu)."""
        return self.gap < 2 * self.mu


@dataclass(frozen=True)
class TensorPair:
    pi00: np.ndarray
    pi: np.ndarray

    def __add__(self, other):
        return TensorPair(self.pi00 + other.pi00, self.pi + other.pi)

    def __sub__(self, other):
        return TensorPair(self.pi00 - other.pi00, self.pi - other.pi)


def matsubara_energy(l, T):
    """ħξ_l = 2π k_B T l in eV."""
    return 2 * np.pi * K_B * T * np.asarray(l)


_PSI_TERMS = 26
_NODE_CHUNK = 2048


def psi(x):
    """2[x + (1 - x²) arctan(1/x)], continued to x = 0 where it equals π.

    Works for complex ``x`` off the negative real axis.
    """
    x = np.asarray(x)
    zero = x == 0
    big = np.abs(x) > 3
    xs = np.where(zero | big, 1.0, x)
    out = 2 * (xs + (1 - xs * xs) * np.arctan(1 / xs))
    out = np.where(zero, np.pi, out)
    if np.any(big):
        # for large |x| the closed form cancels to O(1/x); sum the series
        # 2 sum_n (-1)^n x^-(2n+1) (4n + 4)/((2n + 1)(2n + 3)) instead
        xb = np.where(big, x, 4.0)
        inv2 = 1 / (xb * xb)
        term = 1 / xb
        acc = np.zeros_like(term)
        for n in range(_PSI_TERMS):
            acc = acc + term * (4 * n + 4) / ((2 * n + 1) * (2 * n + 3))
            term = -term * inv2
        out = np.where(big, 2 * acc, out)
    return out[()] if out.ndim == 0 else out


def _nodes(params, w, k):
    w = np.asarray(w)
    k = np.asarray(k, dtype=float)
    w, k = np.broadcast_arrays(w, k)
    if np.any(k < 0):
        raise DomainError("k must be non-negative")
    if not np.iscomplexobj(w) and np.any(w < 0):
        raise DomainError("frequency must be non-negative")
    if np.any((w == 0) & (k == 0)):
        raise DomainError("tensor undefined at the origin node (w, k) = (0, 0)")
    eps = params.vf_ratio * HBAR_C * k
    E = np.sqrt(eps * eps + w * w)
    return w, k, eps, E


def tensor_zeroT_undoped(params, w, k):
    """Zero-temperature tensor of a sheet with empty conduction band (mu = 0).

    ``w`` may be complex (analytic continuation).  At ``w = 0`` the result is
    ``pi00 = alpha k Ψ(D)/v``, ``pi = alpha v k³ Ψ(D)`` in reduced units.
    """
    w, k, eps, E = _nodes(params, w, k)
    a = params.alpha
    ps = psi(params.gap / E)
    return TensorPair(a * k * k * HBAR_C / E * ps, a * k * k * E / HBAR_C * ps)


def _sq(y):
    # sqrt(1 + y²) analytic in Re y > 0 and across the segment [-i, i]
    return np.sqrt(y + 1j) * np.sqrt(y - 1j)


def tensor_zeroT_doped(params, w, k):
    """Zero-temperature tensor for a filled Fermi sea, gap < 2 mu.

    The ``Im f(y)`` of the textbook form is written as
    ``(f(y+) - f(y-))/(2i)`` with ``y± = (w ± 2i mu)/(eps sqrt(M))``, which
    is identical for real frequencies and is the analytic continuation for
    complex ``w``.
    """
    if not params.doped:
        raise CaseError("doped zero-temperature form requires gap < 2 mu")
    w, k, eps, E = _nodes(params, w, k)
    if np.any(k == 0):
        raise DomainError("filled-sea form needs k > 0")
    a, mu, v = params.alpha, params.mu, params.vf_ratio
    D = params.gap / E
    M = 1 + D * D
    with np.errstate(divide="ignore", invalid="ignore"):
        den = eps * np.sqrt(M)
        yp = (w + 2j * mu) / den
        ym = (w - 2j * mu) / den

        def im(f):
            return (f(yp) - f(ym)) / 2j

        # y sq(y) = y² + 1/2 - 1/(2 (sq(y) + y)²).  The y² part is done by
        # hand because for k << w it cancels the constant term to O(k²); the
        # 1/2 drops out of Im f.
        A = im(lambda y: -0.5 / np.square(_sq(y) + y))
        Bv = im(lambda y: np.log(y + _sq(y)))
    q0 = 8 * a * mu / (HBAR_C * v * v)
    e_minus_w = eps * eps / (E + w)
    pi00 = q0 * e_minus_w / E - a * k * k * HBAR_C / E * (2 * M * A + (2 - M) * (2 * Bv - np.pi))
    pi = 8 * a * mu * w * e_minus_w / (v * v * HBAR_C**3) + a * E * k * k / HBAR_C * (
        2 * M * A - (2 - M) * (2 * Bv - np.pi))
    # w = 0 (static) nodes in closed real form; k = 0 (uniform field) limit
    if not np.iscomplexobj(w) or np.all(np.imag(w) == 0):
        static = np.real(w) == 0
        if np.any(static):
            s = 2 * mu / (eps[static] * np.sqrt(M[static]))
            inside = s < 1
            sc = np.where(inside, s, 0.0)
            A0 = np.where(inside, sc * np.sqrt(1 - sc * sc), 0.0)
            B0 = np.where(inside, np.arcsin(sc), np.pi / 2)
            kk = k[static]
            Ms, Es = M[static], E[static]
            pi00 = np.array(pi00, dtype=complex)
            pi = np.array(pi, dtype=complex)
            pi00[static] = q0 - a * kk * kk * HBAR_C / Es * (2 * Ms * A0 + (2 - Ms) * (2 * B0 - np.pi))
            pi[static] = a * Es * kk * kk / HBAR_C * (2 * Ms * A0 - (2 - Ms) * (2 * B0 - np.pi))
    if not np.iscomplexobj(w):
        pi00, pi = np.real(pi00), np.real(pi)
    return TensorPair(pi00, pi)


def tensor_zeroT(params, w, k):
    """Zero-temperature tensor, choosing the undoped or filled-sea form.

    ``gap == 2 mu`` is treated as the undoped side (its limit from above).
    """
    if params.doped:
        return tensor_zeroT_doped(params, w, k)
    return tensor_zeroT_undoped(params, w, k)


# --- finite temperature -------------------------------------------------------

def _fermi_weight(u, B, m, uF, excess):
    """n(Bu + m) + n(Bu - m), minus the T = 0 step theta(uF - u) if ``excess``."""
    x = B * u
    w = expit(-(x + m))
    if not excess:
        return w + expit(m - x)
    # below uF the two terms nearly cancel when x is small; their difference
    # is -sinh(x)/(2 cosh((x+m)/2) cosh((x-m)/2)), evaluated in log form
    ap, am = np.abs(x + m), np.abs(x - m)
    s = 0.5 * (ap + am)
    diff = -np.exp(x - s) * (-np.expm1(-2 * x)) / ((1 + np.exp(-ap)) * (1 + np.exp(-am)))
    return np.where(u < uF, diff, w + expit(m - x))


def _softplus(x):
    return np.logaddexp(0.0, x)


def _intervals(lo, hi, breaks):
    """Split [lo_i, hi_i] at interior breakpoints; returns (lo, hi, owner)."""
    n = len(lo)
    pts = [lo[:, None], hi[:, None]]
    for b in breaks:
        bb = np.where((b > lo) & (b < hi), b, lo)
        pts.append(bb[:, None])
    P = np.sort(np.concatenate(pts, axis=1), axis=1)
    a, b = P[:, :-1].ravel(), P[:, 1:].ravel()
    owner = np.repeat(np.arange(n), P.shape[1] - 1)
    keep = b > a
    return a[keep], b[keep], owner[keep]


def _dynamic_integrals(params, w, eps, E, T, excess, rtol):
    """Loop integrals for w > 0; returns (I00, I1) per node.

    With ``z = u - i eta`` the square root is ``S = sqrt(et² M - z²)`` and
    ``S - iz = et² M/(S + iz)``.  Using that identity the two kernels become
    ``et²`` times the bounded expressions below, so the overall factor k²
    carried by both components is extracted exactly instead of emerging from
    a cancellation between O(1) terms (which loses all digits once
    ``eps << w``).
    """
    kT = K_B * T
    D = params.gap / E
    B = E / (2 * kT)
    m = params.mu / kT
    uF = 2 * params.mu / E
    eta = w / E
    et = eps / E
    M = 1 + D * D
    ustar = np.sqrt(1 + et * et * D * D)
    lo = D
    hi = np.maximum(D, uF) + _FERMI_CUTOFF / B
    lo_i, hi_i, own = _intervals(lo, hi, [ustar, uF, D + 1.0 / B, uF - 2.0 / B, uF + 2.0 / B])

    S0 = np.sqrt(et * et * M + eta * eta)
    c0 = (et * D) ** 2 / (S0 + 1)

    def f(u, o):
        wt = _fermi_weight(u, B[o], m, uF[o], excess)
        eo, d2 = eta[o], D[o] ** 2
        iz = 1j * u + eo
        S = np.sqrt(et[o] ** 2 * M[o] - (u - 1j * eo) ** 2)
        # S - 1 split into its u = 0 value and the u-dependent change, so
        # that both kernels vanish like u at u = 0 without cancellation
        sm1 = c0[o] - u * (u - 2j * eo) / (S + S0[o])
        Siz = S + iz
        j00 = np.real((sm1 + 1j * u) / ((1 + eo) * Siz) + d2 * iz / (S * Siz))
        j1 = np.real((1j * u - eo * sm1 * (1 + Siz)) / (S * Siz * (1 + eo))) - d2 * np.real(1 / Siz)
        return np.column_stack([wt * j00, wt * j1])

    res = integrate_batch(f, lo_i, hi_i, own, len(w), rtol=rtol, max_intervals=2000)
    return res.values[:, 0], res.values[:, 1]


def _static_integrals(params, eps, T, excess, rtol):
    """Loop integrals at w = 0 in closed-kernel form; returns (I00, I1)."""
    kT = K_B * T
    D = params.gap / eps
    B = eps / (2 * kT)
    m = params.mu / kT
    uF = 2 * params.mu / eps
    ustar = np.sqrt(1 + D * D)
    # u = u* - v² removes the inverse square root at u = u*;
    # u* - D = 1/(u* + D) keeps the range accurate for large D
    vmax = np.sqrt(1.0 / (ustar + D))

    def to_v(u):
        return np.sqrt(np.clip(ustar - u, 0.0, None))

    lo_i, hi_i, own = _intervals(np.zeros_like(vmax), vmax,
                                 [to_v(uF), to_v(D + 1.0 / B), to_v(D + 20.0 / B),
                                  to_v(uF - 2.0 / B), to_v(uF + 2.0 / B)])

    def f(v, o):
        us = ustar[o]
        u = us - v * v
        wt = _fermi_weight(u, B[o], m, uF[o], excess)
        root = np.sqrt(us + u)
        # 2v - 2(1 - u²)/root rewritten as a sum of non-negative terms, using
        # u² - D² = (vmax² - v²)(u + D) and v·root = sqrt(u*² - u²)
        vm, d2 = vmax[o], D[o] ** 2
        g1 = 2 * (vm - v) * (vm + v) * (u + D[o]) / root
        g00 = v * g1 * root / (1 + v * root) + 2 * d2 / root
        return np.column_stack([wt * g00, wt * g1])

    res = integrate_batch(f, lo_i, hi_i, own, len(eps), rtol=rtol, max_intervals=2000)
    # above u* the TM kernel is 1 and the TE kernel vanishes: Fermi tails in closed form
    x = B * ustar
    tail = _softplus(-(x + m))
    if excess:
        tail = tail + _softplus(-np.abs(m - x))
    else:
        tail = tail + _softplus(m - x)
    return res.values[:, 0] + tail / B, res.values[:, 1]


def _loop(params, w, k, T, excess, rtol):
    if not T > 0:
        raise DomainError("temperature must be positive")
    w, k, eps, E = _nodes(params, w, k)
    if np.iscomplexobj(w):
        raise DomainError("finite-temperature part is evaluated on the imaginary axis only")
    shape = w.shape
    w, k, eps, E = (np.ravel(x).astype(float) for x in (w, k, eps, E))
    a, v = params.alpha, params.vf_ratio
    pi00 = np.zeros_like(w)
    pi = np.zeros_like(w)
    static = w == 0
    if np.any(static & (k > 0)):
        idx = np.flatnonzero(static)
        I00, I1 = _static_integrals(params, eps[idx], T, excess, rtol)
        e = eps[idx]
        pi00[idx] = 4 * a * e / (HBAR_C * v * v) * I00
        pi[idx] = -4 * a * e**3 / (v * v * HBAR_C**3) * I1
    dyn = ~static
    all_dyn = np.flatnonzero(dyn)
    # chunks bound the memory of the batched integration
    for start in range(0, len(all_dyn), _NODE_CHUNK):
        idx = all_dyn[start:start + _NODE_CHUNK]
        I00, I1 = _dynamic_integrals(params, w[idx], eps[idx], E[idx], T, excess, rtol)
        e, E_ = eps[idx], E[idx]
        pi00[idx] = 4 * a * e * e / (E_ * HBAR_C * v * v) * I00
        pi[idx] = -4 * a * E_ * e * e / (v * v * HBAR_C**3) * I1
    return TensorPair(pi00.reshape(shape), pi.reshape(shape))


def tensor_thermal_part(params, w, k, T, rtol=1e-10):
    """Fermi-factor part of the tensor at temperature T (full occupations).

    At ``w = 0`` the kernels are taken in their static limit analytically:
    the TM kernel becomes ``1 - (1-u²)/sqrt(u*² - u²)`` below ``u*`` and 1
    above it, and the TE component keeps a finite remainder once the ``ξ²``
    prefactor is absorbed.
    """
    return _loop(params, w, k, T, False, rtol)


def tensor_thermal_excess(params, w, k, T, rtol=1e-10):
    """Π(T) - Π(T=0), integrated with the zero-temperature occupation subtracted."""
    return _loop(params, w, k, T, True, rtol)


def tensor_components(params, w, k, T, rtol=1e-10):
    """Total tensor at temperature ``T`` (``T = 0`` selects the closed forms)."""
    if T < 0:
        raise DomainError("temperature must be non-negative")
    base = tensor_zeroT(params, w, k)
    if T == 0:
        return base
    return base + tensor_thermal_excess(params, w, k, T, rtol)


def fermi_wave_number(params):
    """k_F in 1/µm: where eps·sqrt(1 + (gap/eps)²) = 2 mu."""
    if not params.doped:
        return 0.0
    return math.sqrt(4 * params.mu**2 - params.gap**2) / (params.vf_ratio * HBAR_C)
