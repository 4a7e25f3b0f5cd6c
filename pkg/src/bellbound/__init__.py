"""bellbound: Fano-inequality bounds for CHSH games with communication.

Exact discrete information theory, Bell-functional scoring, bound
surfaces over conditional outcome probabilities, and simulation of
local-hidden-variable-plus-communication protocols.
"""

from .infocore import (
    DiscreteJoint,
    DomainError,
    InvariantBreach,
    binary_entropy,
    condition,
    conditional_entropy,
    derive_xor,
    entropy,
    fano_check_general,
    fano_max_success,
    guessed_information,
    inv_binary_entropy_upper,
    marginalize,
    mutual_information,
    relabel,
)
from .protocols import (
    BUILTIN_PROTOCOLS,
    AnalysisReport,
    CellStats,
    EmpiricalJoint,
    EnumerationCapError,
    Protocol,
    ProtocolError,
    analyze,
    empirical_scores,
    enumerate_local_deterministic,
    exact_joint,
    load_protocol,
    make_biased_strategy,
    make_local_deterministic,
    make_one_bit_pr,
    random_protocol,
    random_protocol_b_independent,
    random_protocol_outcome_masked,
    resolve_protocol,
    sample_joint,
    save_protocol,
)
from .scores import (
    ALL_VARIANTS,
    EvaluationError,
    InfoReport,
    ScoreReport,
    VariantSpec,
    beta_score,
    chsh_setting_conditionals,
    chsh_variant_score,
    classify_score,
    full_report,
    ic_alpha,
    transmitted_deltas,
)
from .surfaces import (
    BoundSurface,
    BoundTheoremError,
    SurfacePoint,
    alpha_max_point,
    beta_max_from_info,
    beta_max_point,
    h_B_point,
    h_Bxorb_point,
    scan_surface,
    surface_summary,
    write_surface_csv,
)
from .verify import CheckResult, VerifyReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "ALL_VARIANTS",
    "AnalysisReport",
    "BUILTIN_PROTOCOLS",
    "BoundSurface",
    "BoundTheoremError",
    "CellStats",
    "CheckResult",
    "DiscreteJoint",
    "DomainError",
    "EmpiricalJoint",
    "EnumerationCapError",
    "EvaluationError",
    "InfoReport",
    "InvariantBreach",
    "Protocol",
    "ProtocolError",
    "ScoreReport",
    "SurfacePoint",
    "VariantSpec",
    "VerifyReport",
    "alpha_max_point",
    "analyze",
    "beta_max_from_info",
    "beta_max_point",
    "beta_score",
    "binary_entropy",
    "chsh_setting_conditionals",
    "chsh_variant_score",
    "classify_score",
    "condition",
    "conditional_entropy",
    "derive_xor",
    "empirical_scores",
    "entropy",
    "enumerate_local_deterministic",
    "exact_joint",
    "fano_check_general",
    "fano_max_success",
    "full_report",
    "guessed_information",
    "h_B_point",
    "h_Bxorb_point",
    "ic_alpha",
    "inv_binary_entropy_upper",
    "load_protocol",
    "make_biased_strategy",
    "make_local_deterministic",
    "make_one_bit_pr",
    "marginalize",
    "mutual_information",
    "random_protocol",
    "random_protocol_b_independent",
    "random_protocol_outcome_masked",
    "relabel",
    "resolve_protocol",
    "run_verification",
    "sample_joint",
    "save_protocol",
    "scan_surface",
    "surface_summary",
    "transmitted_deltas",
    "write_surface_csv",
]
