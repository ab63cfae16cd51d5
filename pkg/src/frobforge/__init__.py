"""frobforge: Frobenius pushforwards, differential operators and cotangent duals over F_p."""

__version__ = "0.1.0"

from .polynomial import Polynomial  # noqa: E402
from .ring import GradedRing, a_invariant, degree_basis, groebner, reduce  # noqa: E402
from .frobenius import (  # noqa: E402
    FrobeniusModule,
    SplittingRecord,
    digit_split,
    f_signature_estimate,
    fedder_is_fpure,
    free_rank,
    pushforward,
)
from .decompose import SummandFingerprint, decompose, ffrt_witness, graded_end  # noqa: E402
from .finite_algebra import FiniteAlgebra, split_idempotents  # noqa: E402
from .diffops import (  # noqa: E402
    LocalizedElement,
    PLinearOperator,
    act_localized,
    localization_generation,
    min_negative_degree,
    operator_space,
)
from .cotangent import graded_hom_dim, kaehler_presentation, section_report, sym_power  # noqa: E402
from .presentation import ModulePresentation  # noqa: E402
from .specfile import RingSpec, parse_ring_spec, print_ring_spec  # noqa: E402

__all__ = [
    "FiniteAlgebra",
    "FrobeniusModule",
    "GradedRing",
    "LocalizedElement",
    "ModulePresentation",
    "PLinearOperator",
    "Polynomial",
    "RingSpec",
    "SplittingRecord",
    "SummandFingerprint",
    "a_invariant",
    "act_localized",
    "decompose",
    "degree_basis",
    "digit_split",
    "f_signature_estimate",
    "fedder_is_fpure",
    "ffrt_witness",
    "free_rank",
    "graded_end",
    "graded_hom_dim",
    "groebner",
    "kaehler_presentation",
    "localization_generation",
    "min_negative_degree",
    "operator_space",
    "parse_ring_spec",
    "print_ring_spec",
    "pushforward",
    "reduce",
    "section_report",
    "split_idempotents",
    "sym_power",
]
