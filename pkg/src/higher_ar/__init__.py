"""Higher Auslander-Reiten sequences for tensor products of homogeneous
representation-finite path algebras, computed with exact rational arithmetic."""

from .almostsplit import (AlmostSplitSeq, ExtractedPair, VerificationReport, apply_F, apply_F_tilde,
                          apply_G, build_base_sequence, extract_chain_map, homotopy_square_equiv,
                          slice_decompose, tensor_almost_split, verify_almost_split)
from .complexes import (ChainMapF, ComplexF, cone, homology_dims, is_exact, is_quasi_iso, realize,
                        shift, tensor_chain_map, total_tensor)
from .ctcat import (CTCategory, FormalModule, IndLabel, MorphismMatrix, compose, homogeneity,
                    is_radical, knit, tensor_category)
from .errors import *  # noqa: F401,F403
from .exactlin import RatMatrix, kernel_basis, kron, rank, solve
from .quiver import (QuiverSpec, Representation, RepMorphism, decompose, format_quiver, hom_basis,
                     injective, is_indecomposable, parse_quiver, projective, rad_basis, tau, tau_minus)

__version__ = "0.1.0"
