"""Monte Carlo laboratory for SLE/CLE processes and their lattice analogues."""

from cle_lab import params

__all__ = ["params"]
__version__ = "0.1.0"
