"""Cyclotomy of order 6, almost difference sets over GF(2) x Z_p, and the
exhaustive check that no DHM-type support of order 6 is one."""

__version__ = "0.1.0"

from .field_core import (  # noqa: E402
    CalibrationError,
    CyclotomyContext,
    CyclotomyError,
    build_context,
    calibrate_signs,
    cyclotomic_number_bruteforce,
    decompose_quadratic_form,
    find_primitive_root,
)
from .cyclo6_formulas import (  # noqa: E402
    cyclotomic_number_formula,
    lemma7_dC_formula,
    lemma_distance_formula,
    reduce_pair,
    verify_formulas,
)
from .distance import (  # noqa: E402
    C,
    C_PRIME,
    SupportSet,
    build_dhm_support,
    dC_decomposed,
    dCprime_correction,
    d_IJ_oracle,
    difference_function,
    spectrum,
)
from .ads_search import classify_ads, sweep_dhm, verify_lemma8, verify_theorem1  # noqa: E402
from .sequences import (  # noqa: E402
    classify_levels,
    periodic_autocorrelation,
    support_to_sequence,
)
