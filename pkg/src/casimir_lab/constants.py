"""Physical constants in the package's working units (eV, µm, K)."""

HBAR_C = 0.1973269804  # eV·µm
K_B = 8.617333262e-5  # eV/K
FINE_STRUCTURE = 7.2973525693e-3
FERMI_VELOCITY_RATIO = 1.0 / 300.0

# hydrodynamic sheet wave number, 6.75e5 1/m expressed in 1/µm
HYDRODYNAMIC_K = 0.675

ZETA3 = 1.2020569031595942
