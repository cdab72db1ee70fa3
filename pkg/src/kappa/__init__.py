"""kappa: exact computations in the Hopf algebra K_n."""

__version__ = "0.1.0"
