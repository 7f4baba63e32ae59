"""Run configuration: parsing, validation and construction of systems.

A configuration is a nested mapping (usually read from TOML)::

    command = "entropy-scan"      # energy | cp-energy | entropy-scan |
                                  # nernst-check | breakdown | pfa
    system = "plates"             # plates | atom (cp-energy implies atom)

    [geometry]
    a = 1.0                       # µm; a list gives a separation sweep
    R = 100.0                     # µm, sphere radius (pfa only)

    [material]                    # plate (both plates unless [material2])
    kind = "graphene"             # ideal | plasma | drude | dielectric |
    gap = 0.2                     #   dielectric_dc | hydrodynamic | graphene
    mu = 0.0

    [atom]
    alpha0 = 6.67e-13             # µm³
    omega0 = 11.65                # eV, optional (default: static)

    [temperature]
    value = 300.0                 # K, or a grid:
    # min = 1.0, max = 20.0, points = 8, log = true

    [tolerances]
    rel = 1e-6

    [run]
    threads = 1

    [output]
    path = "out.csv"
    format = "csv"                # csv | json

Energies are in eV, lengths in µm, temperatures in K.
"""
from dataclasses import dataclass, field
import math
import os
import sys

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

from .energy import AtomPlateSystem, PlatePlateSystem
from .errors import CasimirError, ConfigError
from .reflection import (FresnelProvider, GrapheneConductivityProvider,
                         GrapheneCorrelationProvider, GraphenePTProvider,
                         HydrodynamicProvider, IdealMetalProvider)
from .response import AtomModel, ConstantEps, ConstantEpsWithDC, Drude, HydrodynamicSheet, Plasma
from .tensor import GrapheneParams

COMMANDS = ("energy", "cp-energy", "entropy-scan", "nernst-check", "breakdown", "pfa")
FORMATS = ("csv", "json")
THREADS_ENV = "CASIMIR_LAB_THREADS"

_MATERIAL_KEYS = {
    "ideal": set(),
    "plasma": {"wp", "mu0"},
    "drude": {"wp", "gamma", "mu0", "relaxation", "T_ref", "gamma_power"},
    "dielectric": {"eps0", "mu0"},
    "dielectric_dc": {"eps0", "sigma", "mu0"},
    "hydrodynamic": {"K"},
    "graphene": {"gap", "mu", "representation"},
}
_GRAPHENE_REPR = {"pt": GraphenePTProvider, "correlation": GrapheneCorrelationProvider,
                  "conductivity": GrapheneConductivityProvider}


@dataclass
class RunConfig:
    """Validated configuration (see module docstring for the file layout)."""
    command: str
    system: str
    separations: list
    temperatures: list
    material: dict
    material2: dict = None
    atom: dict = None
    radius: float = None
    rel_tol: float = 1e-6
    threads: int = 1
    output_path: str = None
    output_format: str = "csv"
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def is_atom(self):
        return self.system == "atom"


def load_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path!r}: {exc}") from None


_GRID_KEYS = {"min", "max", "points", "log"}


def _replaces(key, old, new):
    """True when ``new`` switches the form of section ``key`` instead of editing it."""
    if key in ("material", "material2"):
        return "kind" in new and new["kind"] != old.get("kind")
    if key == "temperature":
        return ("value" in new) != ("value" in old) and ("value" in new or bool(_GRID_KEYS & set(new)))
    return False


def merge(base, override):
    """Recursive dictionary merge; values in ``override`` win.

    A section that switches form (another material ``kind``, or a temperature
    list in place of a grid and vice versa) replaces the base section whole.
    """
    out = dict(base)
    for key, val in override.items():
        old = out.get(key)
        if isinstance(val, dict) and isinstance(old, dict) and not _replaces(key, old, val):
            out[key] = merge(old, val)
        else:
            out[key] = val
    return out


def _number(section, key, value, positive=True, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be finite")
    if positive and not (value > 0 or (allow_zero and value == 0)):
        raise ConfigError(f"{section}.{key} must be {'>= 0' if allow_zero else '> 0'}")
    return value


def _temperatures(spec):
    if not isinstance(spec, dict):
        raise ConfigError("[temperature] section is required")
    if "value" in spec:
        if set(spec) - {"value"}:
            raise ConfigError("temperature: give either value or a min/max/points grid")
        vals = spec["value"]
        vals = vals if isinstance(vals, list) else [vals]
        out = [_number("temperature", "value", v, allow_zero=True) for v in vals]
    else:
        missing = {"min", "max", "points"} - set(spec)
        if missing:
            raise ConfigError(f"temperature grid lacks {sorted(missing)}")
        unknown = set(spec) - {"min", "max", "points", "log"}
        if unknown:
            raise ConfigError(f"unknown temperature keys {sorted(unknown)}")
        t0 = _number("temperature", "min", spec["min"])
        t1 = _number("temperature", "max", spec["max"])
        n = spec["points"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError("temperature.points must be a positive integer")
        if n > 1 and not t1 > t0:
            raise ConfigError("temperature.max must exceed temperature.min")
        log = spec.get("log", False)
        if not isinstance(log, bool):
            raise ConfigError("temperature.log must be true or false")
        grid = np.geomspace(t0, t1, n) if log else np.linspace(t0, t1, n)
        out = [float(t) for t in grid]
    if not out:
        raise ConfigError("empty temperature list")
    return out


def _material(section, spec):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"[{section}] needs a 'kind'")
    kind = spec["kind"]
    if kind not in _MATERIAL_KEYS:
        raise ConfigError(f"{section}.kind {kind!r} unknown; choose from {sorted(_MATERIAL_KEYS)}")
    unknown = set(spec) - _MATERIAL_KEYS[kind] - {"kind"}
    if unknown:
        raise ConfigError(f"{section}: unknown keys for {kind!r}: {sorted(unknown)}")
    return dict(spec)


def parse_config(raw, threads=None, tol=None, output=None, fmt=None):
    """Validate a raw mapping; keyword arguments override the file values."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a table")
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {command!r}")
    system = "atom" if command == "cp-energy" else raw.get("system", "plates")
    if system not in ("plates", "atom"):
        raise ConfigError("system must be 'plates' or 'atom'")
    geom = raw.get("geometry")
    if not isinstance(geom, dict) or "a" not in geom:
        raise ConfigError("[geometry] with separation 'a' is required")
    a = geom["a"]
    seps = [_number("geometry", "a", v) for v in (a if isinstance(a, list) else [a])]
    if not seps:
        raise ConfigError("geometry.a is empty")
    radius = None
    if command == "pfa":
        if "R" not in geom:
            raise ConfigError("pfa needs geometry.R")
        radius = _number("geometry", "R", geom["R"])
        if system == "atom":
            raise ConfigError("pfa applies to plates only")
    material = _material("material", raw.get("material"))
    material2 = _material("material2", raw["material2"]) if "material2" in raw else None
    atom = None
    if system == "atom":
        atom = raw.get("atom")
        if not isinstance(atom, dict) or "alpha0" not in atom:
            raise ConfigError("atom systems need [atom] with alpha0")
        if set(atom) - {"alpha0", "omega0"}:
            raise ConfigError(f"unknown atom keys {sorted(set(atom) - {'alpha0', 'omega0'})}")
        if material2 is not None:
            raise ConfigError("[material2] is meaningless for an atom system")
    temps = _temperatures(raw.get("temperature"))
    if command in ("entropy-scan", "nernst-check", "breakdown") and min(temps) <= 0:
        raise ConfigError(f"{command} needs positive temperatures")
    if command in ("entropy-scan", "nernst-check"):
        if len(seps) != 1:
            raise ConfigError(f"{command} takes a single separation")
        if any(b <= a for a, b in zip(temps, temps[1:])):
            raise ConfigError("temperature grid must be strictly increasing")
    rel = raw.get("tolerances", {}).get("rel", 1e-6) if tol is None else tol
    rel = _number("tolerances", "rel", rel)
    if rel >= 0.1:
        raise ConfigError("tolerances.rel must be < 0.1")
    if threads is None:
        threads = raw.get("run", {}).get("threads")
    if threads is None and os.environ.get(THREADS_ENV):
        try:
            threads = int(os.environ[THREADS_ENV])
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    threads = 1 if threads is None else threads
    if isinstance(threads, bool) or not isinstance(threads, int) or threads < 1:
        raise ConfigError("threads must be a positive integer")
    out = raw.get("output", {})
    path = output if output is not None else out.get("path")
    fmt = fmt if fmt is not None else out.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"output format must be one of {FORMATS}")
    cfg = RunConfig(command, system, seps, temps, material, material2, atom, radius, rel,
                    threads, path, fmt, raw)
    # build once so that model-level validation errors surface as config errors
    build_system(cfg, seps[0])
    return cfg


def build_provider(spec):
    kind = spec["kind"]
    args = {k: v for k, v in spec.items() if k != "kind"}
    try:
        if kind == "ideal":
            return IdealMetalProvider()
        if kind == "hydrodynamic":
            return HydrodynamicProvider(HydrodynamicSheet(**args) if args else None)
        if kind == "graphene":
            rep = args.pop("representation", "pt")
            if rep not in _GRAPHENE_REPR:
                raise ConfigError(f"graphene representation must be one of {sorted(_GRAPHENE_REPR)}")
            return _GRAPHENE_REPR[rep](GrapheneParams(**args))
        model = {"plasma": Plasma, "drude": Drude, "dielectric": ConstantEps,
                 "dielectric_dc": ConstantEpsWithDC}[kind](**args)
        return FresnelProvider(model)
    except ConfigError:
        raise
    except (TypeError, CasimirError) as exc:
        raise ConfigError(f"material {kind!r}: {exc}") from None


def build_system(cfg, a):
    p1 = build_provider(cfg.material)
    if cfg.is_atom:
        try:
            atom = AtomModel(**{k: float(v) for k, v in cfg.atom.items()})
        except (TypeError, ValueError, CasimirError) as exc:
            raise ConfigError(f"atom: {exc}") from None
        return AtomPlateSystem(atom, p1, a=a)
    p2 = build_provider(cfg.material2) if cfg.material2 is not None else None
    return PlatePlateSystem(p1, p2, a=a)


def graphene_params_of(cfg):
    """GrapheneParams when every plate is the same graphene sheet, else None."""
    specs = [cfg.material] + ([cfg.material2] if cfg.material2 is not None else [])
    if any(s["kind"] != "graphene" for s in specs):
        return None
    params = [GrapheneParams(**{k: v for k, v in s.items() if k in ("gap", "mu")}) for s in specs]
    return params[0] if all(p == params[0] for p in params) else None

