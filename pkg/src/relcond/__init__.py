"""Relative-error conditioning of the linear ODE solution map ``y0 -> exp(tA) y0``.

Submodules
----------
linalg
    Norms, dual norms of row functionals, matrix exponential, eigendecomposition.
spectrum
    Spectral levels, rightmost eigenvector data and amplification factors ``f_j``.
condition
    Direct condition numbers ``K(t, y0, z0)`` and ``K(t, y0)``, error curves,
    componentwise errors and transient-growth error bounds.
asymptotic
    Long-time condition numbers, the OSF/OT factorization and 2-norm geometry.
onset
    Bounds on the distance between direct and asymptotic condition numbers
    and estimates of when that distance becomes small.
experiments
    Seeded Monte-Carlo studies.
models
    Preset scenarios with reference values, including a defective example
    handled through a supplied Jordan basis.
cli
    Command-line front end (``relcond``).
"""

from .errors import (InputError, RangeError, RelcondError, RLGEError,
                     UnsupportedStructureError)
from .linalg import P1, P2, PINF, Norm, eig_full, mat_exp, mean_p, parse_norm

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "RangeError",
    "RelcondError",
    "RLGEError",
    "UnsupportedStructureError",
    "Norm",
    "P1",
    "P2",
    "PINF",
    "mean_p",
    "parse_norm",
    "eig_full",
    "mat_exp",
]
