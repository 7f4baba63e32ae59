"""Ready-made run configurations.

Each preset is a plain dictionary with the same layout as a TOML config file
(see :mod:`casimir_lab.config`).  The graphene presets pick geometries and
temperature ranges inside the low-temperature windows of their case; the
metal and dielectric presets reproduce the zero-temperature entropy
anomalies of lossy metals and of dielectrics with dc conductivity.
"""
import copy

_SCAN = {"command": "nernst-check", "system": "plates", "tolerances": {"rel": 1e-6}}


def _preset(material, a, t_min, t_max, points=8, system="plates", atom=None, log=True):
    cfg = copy.deepcopy(_SCAN)
    cfg["system"] = system
    cfg["geometry"] = {"a": a}
    cfg["material"] = material
    cfg["temperature"] = {"min": t_min, "max": t_max, "points": points, "log": log}
    if atom is not None:
        cfg["atom"] = atom
    return cfg


# hydrogen-like static polarizability, 0.667 Å^3 in µm^3
_ATOM = {"alpha0": 6.67e-13}

PRESETS = {
    "pristine": _preset({"kind": "graphene", "gap": 0.0, "mu": 0.0}, 0.05, 1.0, 20.0),
    "pristine-atom": _preset({"kind": "graphene", "gap": 0.0, "mu": 0.0}, 0.05, 1.0, 20.0,
                             system="atom", atom=_ATOM),
    "gapped": _preset({"kind": "graphene", "gap": 0.2, "mu": 0.0}, 2.0, 5.0, 50.0),
    "doped": _preset({"kind": "graphene", "gap": 0.0, "mu": 0.1}, 1.0, 5.0, 50.0),
    "critical": _preset({"kind": "graphene", "gap": 0.2, "mu": 0.1}, 2.0, 2.0, 30.0),
    # gamma(T) = gamma * (T/295 K)^2 vanishes at T -> 0 like in a perfect crystal
    "drude": _preset({"kind": "drude", "wp": 9.0, "gamma": 0.03,
                      "relaxation": "perfect_lattice"}, 1.0, 2.0, 20.0),
    "plasma": _preset({"kind": "plasma", "wp": 9.0}, 1.0, 2.0, 20.0),
    # 4 pi sigma0 (in eV) well below 2 pi k_B T over the grid
    "dielectric-dc": _preset({"kind": "dielectric_dc", "eps0": 2.0, "sigma": 1e-6}, 1.0, 2.0, 20.0),
}


def preset(name):
    """Deep copy of the named preset; raises KeyError listing the known names."""
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
