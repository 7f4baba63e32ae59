"""Entropy, low-temperature scans and the Nernst heat theorem.

Entropies are ``S = -dF/dT`` with ``F`` the thermal correction from
:func:`~casimir_lab.energy.thermal_correction_breakdown` (the zero-temperature
energy drops out of the derivative).  Plate-plate entropies are per unit
area, eV/(K µm²); atom-plate entropies are in eV/K.  Helpers that compare
with closed forms work in units of k_B (per µm² for plates).
"""
from dataclasses import dataclass, field
from enum import Enum
import math
import warnings

import numpy as np
from scipy.stats import t as student_t

from .constants import FERMI_VELOCITY_RATIO, HBAR_C, K_B, ZETA3
from .energy import AtomPlateSystem, FreeEnergyBreakdown, thermal_correction_breakdown
from .errors import DegenerateData, DomainError, SeriesOutOfRange, WindowViolation
from .numerics.differentiate import derivative_wrt_parameter
from .numerics.fitting import ScalingFit, fit_scaling
from .reflection import GraphenePTProvider
from .tensor import GrapheneParams

#: "much smaller than one" for the validity windows
WINDOW_LIMIT = 0.1
#: default tolerance (eV) for recognising gap == 2 mu
CRITICAL_TOL = 1e-9
#: fitted entropy exponent separating a power-law decay from a plateau
VERDICT_EXPONENT = 0.5


class CaseLabel(str, Enum):
    PRISTINE = "Pristine"
    GAPPED = "Gapped"
    CRITICAL = "Critical"
    DOPED = "Doped"


class Verdict(str, Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"


def classify_case(params, tol_eV=CRITICAL_TOL):
    """Which of the four low-temperature regimes a graphene sheet is in.

    Gap and chemical potential within ``tol_eV`` of zero count as pristine.
    """
    if not tol_eV > 0:
        raise DomainError("tol_eV must be positive")
    gap, mu = params.gap, params.mu
    if abs(gap) <= tol_eV and abs(mu) <= tol_eV:
        return CaseLabel.PRISTINE
    d = gap - 2 * mu
    if abs(d) <= tol_eV:
        return CaseLabel.CRITICAL
    return CaseLabel.GAPPED if d > 0 else CaseLabel.DOPED


# --- closed forms ---------------------------------------------------------------

def drude_entropy_T0(a, wp):
    """Zero-temperature entropy of Drude plates with vanishing relaxation, k_B/µm².

    Three-term expansion in ``c/(a wp)``; raises :class:`SeriesOutOfRange`
    once that ratio exceeds 0.3.
    """
    if not (a > 0 and wp > 0):
        raise DomainError("a and wp must be positive")
    x = HBAR_C / (a * wp)
    if x > 0.3:
        raise SeriesOutOfRange(f"c/(a wp) = {x:.3g} > 0.3")
    return -ZETA3 / (16 * math.pi * a * a) * (1 - 4 * x + 12 * x * x)


def polylog3(z, tol=1e-17, max_terms=100_000):
    """Li3(z) = sum z^k/k³ for real |z| <= 1."""
    if abs(z) > 1:
        raise DomainError("series needs |z| <= 1")
    if z == 1:
        return ZETA3
    total, zk = 0.0, 1.0
    for k in range(1, max_terms + 1):
        zk *= z
        term = zk / k**3
        total += term
        if abs(term) <= tol * abs(total):
            return total
    return total


def dielectric_dc_entropy_T0(a, eps0):
    """Zero-temperature entropy of dielectric plates with dc conductivity, k_B/µm²."""
    if not eps0 > 1:
        raise DomainError("eps0 must be > 1")
    r = (eps0 - 1) / (eps0 + 1)
    return (ZETA3 - polylog3(r * r)) / (16 * math.pi * a * a)


def cp_dc_entropy_T0(a, alpha0, eps0):
    """Atom-plate analogue for a dielectric with dc conductivity, in k_B."""
    if not eps0 > 1:
        raise DomainError("eps0 must be > 1")
    if not alpha0 > 0:
        raise DomainError("alpha0 must be > 0")
    return alpha0 / (4 * a**3) * (eps0 - 1) / (eps0 + 1)


def cp_dc_entropy_T0_static_jump(a, alpha0, eps0):
    """Atom-plate zero-temperature entropy re-derived from the static TM jump, in k_B.

    The dc conductivity lifts the static TM coefficient from
    ``(eps0-1)/(eps0+1)`` to 1, so the zero-frequency term changes by
    ``alpha0/(4 a^3) * (1 - (eps0-1)/(eps0+1)) = alpha0/(4 a^3) * 2/(eps0+1)``
    per unit k_B T.  This vanishes for eps0 -> inf, where conductivity cannot
    matter, and coincides with :func:`cp_dc_entropy_T0` only at eps0 = 3.
    """
    if not eps0 > 1:
        raise DomainError("eps0 must be > 1")
    if not alpha0 > 0:
        raise DomainError("alpha0 must be > 0")
    return alpha0 / (4 * a**3) * 2 / (eps0 + 1)


# --- entropy ----------------------------------------------------------------------

def _correction(system, rel_tol):
    def F(T):
        return thermal_correction_breakdown(system, T, rel_tol).total_correction
    return F


def entropy_with_error(system, T, rel_tol=1e-6, h0=None):
    """(S, error estimate) with S = -dF/dT by Richardson-extrapolated differences."""
    if not T > 0:
        raise DomainError("temperature must be positive")
    val, err = derivative_wrt_parameter(_correction(system, rel_tol), T, h0=h0)
    return -val, err


def entropy(system, T, rel_tol=1e-6, h0=None):
    """Casimir (eV/(K µm²)) or Casimir-Polder (eV/K) entropy at ``T``."""
    return entropy_with_error(system, T, rel_tol, h0)[0]


# --- validity windows and asymptotes -----------------------------------------------

def _graphene_params(system):
    providers = (system.provider,) if isinstance(system, AtomPlateSystem) else system.providers
    params = [p.params for p in providers if isinstance(p, GraphenePTProvider)]
    if len(params) != len(providers) or any(p != params[0] for p in params):
        return None
    return params[0]


def window_parameters(params, a, T):
    """Small parameters that the low-temperature asymptotics assume ≪ 1.

    The temperature parameter is written with the characteristic frequency
    ``c/(2a)``, i.e. as ``k_B T/(ħc/2a)``.
    """
    case = classify_case(params)
    out = {"thermal": K_B * T * 2 * a / HBAR_C}
    if case in (CaseLabel.GAPPED, CaseLabel.CRITICAL, CaseLabel.DOPED):
        scale = params.gap if params.gap > 0 else 2 * params.mu
        out["velocity"] = FERMI_VELOCITY_RATIO * HBAR_C / (2 * a * scale)
    if case in (CaseLabel.GAPPED, CaseLabel.DOPED):
        out["occupation"] = math.exp(-abs(params.gap - 2 * params.mu) / (2 * K_B * T))
    return out


def check_window(system, T_grid):
    """Warn with :class:`WindowViolation` for temperatures outside the window."""
    params = _graphene_params(system)
    if params is None:
        return []
    bad = []
    for T in T_grid:
        over = {k: v for k, v in window_parameters(params, system.a, T).items() if v > WINDOW_LIMIT}
        if over:
            bad.append(T)
            warnings.warn(f"T = {T} K outside the low-temperature window: {over}", WindowViolation,
                          stacklevel=3)
    return bad


@dataclass(frozen=True)
class Asymptote:
    """Order-of-magnitude low-temperature entropy law ``S ~ scale T^exponent [|ln|]``.

    ``scale`` is in k_B/µm² (plates) or k_B (atom) per K^exponent; with
    ``log_factor`` the law carries ``|ln(a k_B T/ħc)|``.
    """
    exponent: float
    log_factor: bool
    scale_estimate: float

    def evaluate(self, T, a):
        s = self.scale_estimate * T**self.exponent
        if self.log_factor:
            s *= abs(math.log(a * K_B * T / HBAR_C))
        return s


def expected_asymptote(case, atom, a, params, alpha0=None):
    """Tabulated low-temperature entropy law for ``case`` (exponent and size)."""
    case = CaseLabel(case)
    gap, mu = params.gap, params.mu
    hc, kb = HBAR_C, K_B
    if atom:
        if alpha0 is None:
            raise DomainError("atom asymptotes need alpha0")
        vf = FERMI_VELOCITY_RATIO * hc
        table = {
            CaseLabel.PRISTINE: (2, False, alpha0 * kb**2 / (vf**2 * a)),
            CaseLabel.GAPPED: (4, False, alpha0 * kb**4 / (hc**3 * gap)),
            CaseLabel.CRITICAL: (0, False, alpha0 / a**3),
            CaseLabel.DOPED: (1, False, alpha0 * mu**2 * kb / (hc**2 * a * math.sqrt(
                max(4 * mu * mu - gap * gap, 0.0)))),
        }
    else:
        table = {
            CaseLabel.PRISTINE: (2, True, kb**2 / hc**2),
            CaseLabel.GAPPED: (4, False, kb**4 / (hc**2 * gap**2) if gap > 0 else math.inf),
            CaseLabel.CRITICAL: (0, False, 1 / a**2),
            CaseLabel.DOPED: (1, False, a * (4 * mu * mu - gap * gap) * kb / hc**3),
        }
    return Asymptote(*table[case])


# --- scans and verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    T: float
    breakdown: FreeEnergyBreakdown
    entropy: float
    entropy_error: float


def scan_row(system, T, rel_tol=1e-6):
    b = thermal_correction_breakdown(system, T, rel_tol)
    S, err = entropy_with_error(system, T, rel_tol)
    return ScanRow(T, b, S, err)


def low_T_scan(system, T_grid, rel_tol=1e-6, map_fn=map):
    """Breakdown and entropy on an increasing temperature grid.

    ``map_fn`` lets a caller evaluate rows in parallel (e.g. an executor's
    ``map``); rows come back in grid order either way.
    """
    T_grid = [float(T) for T in T_grid]
    if not T_grid:
        raise DomainError("empty temperature grid")
    if any(T <= 0 for T in T_grid) or any(b <= a for a, b in zip(T_grid, T_grid[1:])):
        raise DomainError("temperature grid must be positive and strictly increasing")
    check_window(system, T_grid)
    return list(map_fn(lambda T: scan_row(system, T, rel_tol), T_grid))


@dataclass(frozen=True)
class ZeroLimit:
    """Extrapolated ``S(T -> 0)`` (same units as the input) with an error bar."""
    value: float
    error: float
    exponent: float


def _best_power_fit(T, S, exponents, n_powers):
    """Weighted least squares ``S = s0 + sum_j c_j T^(q+j)`` with the best q.

    Residuals are taken relative to ``|S|`` so that the low-temperature
    points, which decide the limit, are not swamped by the largest values.
    Returns ``(s0, standard error of s0, q)``.
    """
    w = 1.0 / np.abs(S)
    best = None
    for q in exponents:
        A = np.column_stack([np.ones_like(T)] + [T**(q + j) for j in range(n_powers)])
        Aw, Sw = A * w[:, None], S * w
        coef, *_ = np.linalg.lstsq(Aw, Sw, rcond=None)
        resid = Sw - Aw @ coef
        rss = float(resid @ resid)
        if best is None or rss < best[0]:
            dof = max(len(T) - A.shape[1], 1)
            cov = rss / dof * np.linalg.pinv(Aw.T @ Aw)
            best = (rss, float(coef[0]), math.sqrt(max(cov[0, 0], 0.0)), float(q))
    return best[1:]


def extrapolate_to_zero(T, S, S_err=None, exponents=np.arange(0.25, 6.001, 0.05), rel_floor=1e-3,
                        confidence=0.95):
    """Estimate ``S(T -> 0)`` with an error bar that includes model uncertainty.

    The estimate comes from ``S = s0 + c1 T^q + c2 T^(q+1)`` (one power only
    for fewer than five points), with ``q`` chosen on a grid.  The error bar
    is the largest of

    * the least-squares standard error of ``s0`` widened to a two-sided
      ``confidence`` interval with Student's t (few points leave only one or
      two degrees of freedom, where the bare standard error is meaningless);
    * half the spread of ``s0`` over variants of the fit (one power only;
      the low-temperature half of the grid), since below the lowest
      temperature the data cannot tell these forms apart;
    * the input error bars, and ``rel_floor * max|S|`` for the accuracy of
      the entropies themselves.

    ``S`` must not vanish (it sets the fit weights).
    """
    T = np.asarray(T, dtype=float)
    S = np.asarray(S, dtype=float)
    n = len(T)
    if n < 3:
        raise DegenerateData("need at least 3 points to extrapolate")
    if np.any(S == 0):
        raise DegenerateData("entropy vanishes at a grid point")
    order = np.argsort(T)
    T, S = T[order], S[order]
    main_powers = 2 if n >= 5 else 1
    value, stderr, q = _best_power_fit(T, S, exponents, main_powers)
    dof = max(n - 1 - main_powers, 1)
    stderr *= float(student_t.ppf(0.5 + confidence / 2, dof))
    variants = [value, _best_power_fit(T, S, exponents, 1)[0]]
    half = max(3, (n + 1) // 2 + 1)
    if half < n:
        variants.append(_best_power_fit(T[:half], S[:half], exponents, 1)[0])
    spread = (max(variants) - min(variants)) / 2
    in_err = float(np.max(S_err)) if S_err is not None and len(S_err) else 0.0
    err = max(stderr, spread, in_err, rel_floor * float(np.max(np.abs(S))))
    return ZeroLimit(value, err, q)


@dataclass(frozen=True)
class NernstReport:
    case: str
    entropy_limit_estimate: float  # k_B units (per µm² for plates)
    entropy_limit_error: float
    fit: ScalingFit
    expected_exponent: float
    verdict: Verdict
    details: dict = field(default_factory=dict)


def nernst_verdict(scan, case, atom=False, log_scale=None, a=None, min_rows=6):
    """Fit the low-temperature entropy and decide whether it vanishes at T = 0.

    The verdict is *Satisfied* iff the fitted exponent exceeds
    :data:`VERDICT_EXPONENT` and the extrapolated limit is zero within its
    error bar.  ``min_rows`` (default 6) may be lowered for reduced-grid
    smoke runs; the power-law fit then accepts as many points.
    """
    if len(scan) < min_rows:
        raise DegenerateData(f"need at least {min_rows} scan rows, got {len(scan)}")
    T = np.array([r.T for r in scan])
    S = np.array([r.entropy for r in scan]) / K_B
    S_err = np.array([r.entropy_error for r in scan]) / K_B
    label = case.value if isinstance(case, CaseLabel) else str(case)
    expected = {"Pristine": 2.0, "Gapped": 4.0, "Critical": 0.0, "Doped": 1.0}.get(label, float("nan"))
    use_log = label == "Pristine" and not atom
    if log_scale is None:
        # the logarithm's natural argument is a k_B T/ħc
        log_scale = HBAR_C / (a * K_B) if (use_log and a) else 1.0
    if np.all(S > 0) or np.all(S < 0):
        fit = fit_scaling(list(zip(T, S)), try_log=use_log, log_scale=log_scale,
                          min_points=min(min_rows, 5))
    else:
        raise DegenerateData("entropy changes sign across the scan")
    limit = extrapolate_to_zero(T, S, S_err)
    zero_ok = abs(limit.value) <= limit.error
    verdict = Verdict.SATISFIED if (fit.exponent > VERDICT_EXPONENT and zero_ok) else Verdict.VIOLATED
    return NernstReport(label, limit.value, limit.error, fit, expected, verdict,
                        {"limit_fit_exponent": limit.exponent})
