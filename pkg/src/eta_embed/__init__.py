"""Dirichlet eta, its two-parameter embedding eta_{kappa,nu}, and numerical audits."""

__version__ = "0.1.0"

from .errors import (AccuracyError, ConsistencyError, ConvergenceError, DomainError,  # noqa: E402
                     EtaError, PoleError, SingularityError, UsageError, WindingError,
                     ZeroOnBoundaryError)
from .eta_core import (DEFAULT_CONFIG, EtaValue, EvalConfig, eta, eta_derivative,  # noqa: E402
                       eta_many, functional_residual, lambda_factor)
from .embedding import EmbeddingParams, b_kernel, b_ratio, eta_embedding  # noqa: E402
from .coefficients import (CoeffTable, a_coeffs, b_coeffs, coeff_sum_identities,  # noqa: E402
                           coefficient_table, expansion_eval, inversion_eval)
from .zeros import (Rect, ZeroRecord, count_zeros_rect, quartet_check,  # noqa: E402
                    refine_zero, scan_critical_line)
from .audit import AuditConfig, AuditReport, run_suite  # noqa: E402

__all__ = [
    "AccuracyError", "ConsistencyError", "ConvergenceError", "DomainError", "EtaError",
    "PoleError", "SingularityError", "UsageError", "WindingError", "ZeroOnBoundaryError",
    "DEFAULT_CONFIG", "EtaValue", "EvalConfig", "eta", "eta_derivative", "eta_many",
    "functional_residual", "lambda_factor", "EmbeddingParams", "b_kernel", "b_ratio",
    "eta_embedding", "CoeffTable", "a_coeffs", "b_coeffs", "coeff_sum_identities",
    "coefficient_table", "expansion_eval", "inversion_eval", "Rect", "ZeroRecord",
    "count_zeros_rect", "quartet_check", "refine_zero", "scan_critical_line",
    "AuditConfig", "AuditReport", "run_suite",
]
