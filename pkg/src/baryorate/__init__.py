"""Second-order baryogenesis rates for conformally flat spacetimes."""

__version__ = "0.1.0"
