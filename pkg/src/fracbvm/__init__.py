"""Boundary-value-method solver for two-sided space-fractional diffusion.

The discretization is shifted-Grunwald in space and a block
boundary-value scheme in time, giving one all-at-once Kronecker system
A (x) I - h B (x) J_N solved by restarted GMRES with circulant-family
preconditioners (block Strang, BCCB, and the modified BCCB with the
singular symbol value replaced).
"""

from .blocksystem import (BlockSystem, apply_block_operator,
                          assemble_block_system, dense_materialize,
                          dense_spatial)
from .bvm import (BvmScheme, adams_beta_exact, assemble_A_B,
                  assemble_A_B_uniform, characteristic_polynomials,
                  derive_auxiliary_methods, derive_main_method, derive_scheme,
                  select_gam, stability_region_membership)
from .errors import (DomainError, FracbvmError, InnerSolveError,
                     SingularMatrixError, SingularPreconditionerError,
                     SizeGuardError, UnsupportedConfigurationError,
                     UsageError)
from .experiments import (BenchmarkRow, RunConfig, bccb_scaling_sweep,
                          check_stability, default_scheme, dump_spectra,
                          gaussian_pulse_problem, run_example1, run_table,
                          solve_single, write_benchmark_csv)
from .gmres import (GmresConfig, SolveReport, full_gmres_iteration_count,
                    gmres_solve)
from .grunwald import (DiffusionProblem, GershgorinDisc, SpatialOperator,
                       apply_spatial_operator, build_spatial_operator,
                       gershgorin_discs, grunwald_coefficients,
                       operator_entry, wiener_limit, wiener_partial_sum)
from .oracle import (DenseSnapshot, dense_eigenvalues, dense_solve,
                     numerical_rank)
from .precond import (BccbPreconditioner, StrangBlockPreconditioner,
                      apply_bccb_inverse, apply_strang_block_inverse,
                      bccb_eigenvalues, build_bccb, build_strang_block,
                      invertibility_report, strang_wrap_column)
from .structured import (CirculantMatrix, ToeplitzMatrix,
                         circulant_eigenvalues, circulant_solve,
                         strang_circulant_of_grunwald, toeplitz_matvec)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "FracbvmError", "DomainError", "UsageError", "SizeGuardError",
    "UnsupportedConfigurationError", "SingularPreconditionerError",
    "InnerSolveError", "SingularMatrixError",
    # space discretization
    "DiffusionProblem", "SpatialOperator", "GershgorinDisc",
    "grunwald_coefficients", "build_spatial_operator",
    "apply_spatial_operator", "operator_entry", "gershgorin_discs",
    "wiener_partial_sum", "wiener_limit",
    # structured linear algebra
    "ToeplitzMatrix", "CirculantMatrix", "toeplitz_matvec",
    "circulant_eigenvalues", "circulant_solve",
    "strang_circulant_of_grunwald",
    # time scheme
    "BvmScheme", "adams_beta_exact", "derive_main_method",
    "derive_auxiliary_methods", "derive_scheme", "assemble_A_B",
    "assemble_A_B_uniform", "characteristic_polynomials",
    "stability_region_membership", "select_gam",
    # block system
    "BlockSystem", "assemble_block_system", "apply_block_operator",
    "dense_materialize", "dense_spatial",
    # preconditioners
    "StrangBlockPreconditioner", "BccbPreconditioner", "strang_wrap_column",
    "build_strang_block", "apply_strang_block_inverse", "build_bccb",
    "bccb_eigenvalues", "apply_bccb_inverse", "invertibility_report",
    # solver
    "GmresConfig", "SolveReport", "gmres_solve",
    "full_gmres_iteration_count",
    # oracle
    "DenseSnapshot", "dense_solve", "dense_eigenvalues", "numerical_rank",
    # experiments
    "BenchmarkRow", "RunConfig", "gaussian_pulse_problem", "default_scheme",
    "run_example1", "run_table", "write_benchmark_csv", "dump_spectra",
    "check_stability", "solve_single", "bccb_scaling_sweep",
]
