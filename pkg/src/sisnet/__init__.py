"""SIS contagion on networks: Monte Carlo, mean-field analysis and reactive graph processes."""

__version__ = "0.1.0"
