"""Certified densities for rings generated by random algebraic numbers.

Submodules:

* ``exact``: primes, local factors, certified intervals, zeta ratios
* ``polyint``: integer polynomials, discriminants, irreducibility
* ``density``: densities of the e-invariant, ring equality and |X|
* ``sampler``: exhaustive and Monte-Carlo enumeration by height
* ``quadfield``: Kronecker symbols, reduced forms, class groups
* ``factorstats``: factorization censuses over GF(p)
* ``acceptance`` and ``cli``: the verification suite and command line
"""

from .errors import BudgetExceeded, ConsistencyError, DomainError
from .exact import CertifiedInterval, local_factors, zeta_ratio

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CertifiedInterval",
    "ConsistencyError",
    "DomainError",
    "local_factors",
    "zeta_ratio",
]
