"""Multiplicity of real and complex hypersurface and plane-curve germs.

Several independent engines (order of vanishing, generic-projection fiber
counts, the tangent-cone component formula, Puiseux order, and the odd part
of the spherical blow-up) compute m(X, 0) or m(X) mod 2 and are cross-checked.
"""

from .errors import GermMultError

__version__ = "0.1.0"

__all__ = ["GermMultError", "__version__"]
