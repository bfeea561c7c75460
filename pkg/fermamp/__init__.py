"""fermamp - entanglement amplification of fermionic states under the Unruh effect."""

__version__ = "0.1.0"
