"""Exact parallel telescoping for hyperexponential functions.

The package computes minimal parallel telescopers for compatible
hyperexponential functions presented by rational log-derivative vectors,
decides when parallel telescopers exist, and determines the defining operator
of the parameterized Picard-Vessiot group of first-order systems
D_i(Y) = f_i with rational right-hand sides.
"""

from .ratfun import MPoly, Rat, RatFun
from .ore import OreOp
from .hyperexp import HElement, HTerm

__version__ = "0.1.0"

__all__ = [
    "MPoly",
    "Rat",
    "RatFun",
    "OreOp",
    "HTerm",
    "HElement",
    "__version__",
]
