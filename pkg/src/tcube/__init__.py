"""Exact construction and verification of the hypercube Terwilliger algebra.

The scalar field is Q(i); everything downstream (operators, idempotents,
module decomposition, the six bases per irreducible module, representation
and transition matrices, the Leonard-triple recognizer) is computed and
compared with exact equality.
"""

from .scalar import GaussRat
from .linalg import (ExactMatrix, ExactVector, adjoint, gram_schmidt, inner,
                     kernel_basis, kron, kron_power, matmul, matvec, rank)
from .cube import (CubeContext, SpectrumTable, build_context, spectrum,
                   verify_commutators, verify_conjugation,
                   verify_idempotent_families, verify_spectra)
from .decomposition import (Decomposition, IrreducibleModule, decompose,
                            lowering_operator, multiplicity, normalize_seeds,
                            raising_operator, verify_seed_norms)
from .leonard import (BASIS_LABELS, LeonardVerdict, PhiMatrix, SixBases,
                      build_six_bases, hypergeometric_2f1, is_leonard_triple,
                      module_report, module_triple, phi_matrix,
                      representation_matrix, transition_matrices, verify_phi,
                      verify_inner_products, verify_rep_matrices)

__all__ = [
    "GaussRat", "ExactMatrix", "ExactVector", "adjoint", "gram_schmidt",
    "inner", "kernel_basis", "kron", "kron_power", "matmul", "matvec", "rank",
    "CubeContext", "SpectrumTable", "build_context", "spectrum",
    "verify_commutators", "verify_conjugation", "verify_idempotent_families",
    "verify_spectra", "Decomposition", "IrreducibleModule", "decompose",
    "lowering_operator", "multiplicity", "normalize_seeds", "raising_operator",
    "verify_seed_norms", "BASIS_LABELS", "LeonardVerdict", "PhiMatrix",
    "SixBases", "build_six_bases", "hypergeometric_2f1", "is_leonard_triple",
    "module_report", "module_triple", "phi_matrix", "representation_matrix",
    "transition_matrices", "verify_phi", "verify_inner_products",
    "verify_rep_matrices",
]

__version__ = "0.1.0"
