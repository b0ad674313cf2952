"""spectral-kit: numerical range machinery, operator radii, spectral-set
certificates, and Faber/Krylov approximation of matrix functions with
certified error bounds."""

__version__ = "0.1.0"
