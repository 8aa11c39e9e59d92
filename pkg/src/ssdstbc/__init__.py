"""Single-symbol decodable space-time block codes.

Construction, classification, coding-gain evaluation, Monte-Carlo
simulation, and exhaustive rate-bound search for linear dispersion codes
whose ML decoding splits into one decision per complex symbol.
"""

from .bound import ClaimCheck, ClaimReport, PauliWord, max_ssd_family, verify_claims
from .clifford import (
    GeneratorFamily,
    ca_generators,
    hurwitz_radon_family,
    reducible_generators,
)
from .codes import (
    CodeClassification,
    LinearDispersionCode,
    Violation,
    alamouti,
    ciod,
    classify,
    code_from_json,
    code_to_json,
    cuw_ssd,
    cuw_structure,
    instantiate,
    mcuw_ssd,
    normalize,
    tnu_transform,
    ygt_extend,
)
from .gain import (
    DiscriminantReport,
    FullDiversityResult,
    SignalSet,
    apply_rotation,
    cpd,
    discriminant_of,
    diversity_product,
    full_diversity_check,
    rect_qam,
    signature_sweep,
    square_derived_qam,
    sum_difference_map,
    table1_constellation,
    table1_pipeline,
    wwx_parameters,
    wwx_rotation,
)
from .sim import (
    ChannelConfig,
    SimulationResult,
    bit_mapping,
    ml_decode_exhaustive,
    ml_decode_ssd,
    power_scale,
    run_montecarlo,
    wilson_halfwidth,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig",
    "ClaimCheck",
    "ClaimReport",
    "CodeClassification",
    "DiscriminantReport",
    "FullDiversityResult",
    "GeneratorFamily",
    "LinearDispersionCode",
    "PauliWord",
    "SignalSet",
    "SimulationResult",
    "Violation",
    "alamouti",
    "apply_rotation",
    "bit_mapping",
    "ca_generators",
    "ciod",
    "classify",
    "code_from_json",
    "code_to_json",
    "cpd",
    "cuw_ssd",
    "cuw_structure",
    "discriminant_of",
    "diversity_product",
    "full_diversity_check",
    "hurwitz_radon_family",
    "instantiate",
    "max_ssd_family",
    "mcuw_ssd",
    "ml_decode_exhaustive",
    "ml_decode_ssd",
    "normalize",
    "power_scale",
    "rect_qam",
    "reducible_generators",
    "run_montecarlo",
    "signature_sweep",
    "square_derived_qam",
    "sum_difference_map",
    "table1_constellation",
    "table1_pipeline",
    "tnu_transform",
    "verify_claims",
    "wilson_halfwidth",
    "wwx_parameters",
    "wwx_rotation",
    "ygt_extend",
]
