"""Gegenbauer kernels, PSD verification, and spherical-code bounds."""

from . import (
    codebounds,
    constraints,
    gegenbauer,
    randgen,
    serialize,
    simplex,
    spherical,
    symlin,
)
from .codebounds import (
    BoundCertificate,
    CodeProblem,
    PartitionPattern,
    delsarte_bound,
    delsarte_lp,
    theorem61_bound,
)
from .constraints import FeasiblePair, make_pair, reconstruct
from .gegenbauer import eval_1d, eval_mv, gegenbauer_expansion
from .spherical import PointConfiguration, kernel_matrix, named_code, sample_sphere
from .symlin import SymmetricMatrix, eigenvalues, is_psd

__version__ = "0.1.0"

__all__ = [
    "codebounds",
    "constraints",
    "gegenbauer",
    "randgen",
    "serialize",
    "simplex",
    "spherical",
    "symlin",
    "BoundCertificate",
    "CodeProblem",
    "PartitionPattern",
    "delsarte_bound",
    "delsarte_lp",
    "theorem61_bound",
    "FeasiblePair",
    "make_pair",
    "reconstruct",
    "eval_1d",
    "eval_mv",
    "gegenbauer_expansion",
    "PointConfiguration",
    "kernel_matrix",
    "named_code",
    "sample_sphere",
    "SymmetricMatrix",
    "eigenvalues",
    "is_psd",
    "__version__",
]
