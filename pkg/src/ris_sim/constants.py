"""Shared physical constants."""

# Rounded value used throughout; the link-budget breakpoint and the carrier
# wavelength must use the same constant to stay mutually consistent.
SPEED_OF_LIGHT = 3.0e8  # m/s
