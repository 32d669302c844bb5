"""Exact cyclic homology and Chern characters for finite and presented algebras."""

__version__ = "0.1.0"

from .scalars import GaussQ, I, parse_scalar, format_scalar  # noqa: E402
from .algebra import (  # noqa: E402
    AlgMatrix, FDAlgebra, complex_numbers, direct_power, invert, is_idempotent,
    matrix_units, truncated_polynomial, validate_algebra,
)
from .presented import PresentedAlgebra, laurent, normal_form, polynomial_ring, sphere  # noqa: E402
from .forms import (  # noqa: E402
    DEFAULT_CAP, GradedChain, apply_B, apply_b, omega_basis, omega_dim,
    verify_mixed_identities,
)
from .homology import HPReport, hochschild_dims, homology_report, hp_dims  # noqa: E402
from .chern import apply_scaling_c, ch_cq_even, ch_cq_odd, verify_cycle  # noqa: E402
from .derham import (  # noqa: E402
    CIRCLE, CIRCLE_NORMALIZED, SPHERE, KahlerForm, PairingFunctional, ch_cw_even,
    ch_cw_odd, circle_residue, compare_cq_cw, grassmann_curvature, mu_map, pair,
    sphere_integrate,
)
from .morita import (  # noqa: E402
    LeviBlock, cyclic_group, direct_sum, function_algebra, group_algebra,
    invariant_subalgebra, levi_block_model, matrix_algebra, permutation_action,
    symmetric_group, wassermann_toy_check,
)
