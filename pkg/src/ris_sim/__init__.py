"""System-level simulator for RIS-assisted multi-cell wireless networks."""

__version__ = "0.1.0"
