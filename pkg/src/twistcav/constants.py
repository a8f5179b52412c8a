"""Physical constants in Gaussian (CGS) units.

Lengths are in cm, energies in erg, frequencies in rad/s throughout the
package; permittivities are dimensionless relative values.
"""

SPEED_OF_LIGHT = 2.9979e10
"""Speed of light, cm/s."""

HBAR = 1.0546e-27
"""Reduced Planck constant, erg*s."""

BOLTZMANN = 1.3807e-16
"""Boltzmann constant, erg/K."""
