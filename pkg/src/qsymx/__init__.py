"""Quantum symmetric and exterior powers of U_q(g)-modules, checked numerically.

Supported Cartan types are A1, A2 and B2 at real q > 0. The main entry points:

- :func:`qsymx.uqg.build_simple` and :func:`qsymx.uqg.build_module` for modules,
- :func:`qsymx.braiding.coboundary` for the coboundary operator sigma_{V,W},
- :func:`qsymx.symext.sym_subspace` and :func:`qsymx.symext.ext_subspace`,
- :func:`qsymx.groth.verify_cube_identity` for S^3_q - Lambda^3_q in K.
"""

from .cartan import build_root_system
from .errors import QsymxError
from .uqg import build_fundamental, build_module, build_simple, tensor

__version__ = "0.1.0"

__all__ = [
    "QsymxError",
    "build_root_system",
    "build_fundamental",
    "build_module",
    "build_simple",
    "tensor",
    "__version__",
]
