"""Exact continued fractions and the non-finiteness certificate forge."""

import sys

# certificates carry integers with tens of thousands of digits as decimal strings
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

from .certificate import (NonFinitenessCertificate, PairParams, VerificationReport, Witness,
                          global_delta, verify_certificate)
from .contfrac import (ContinuedFraction, RationalInterval, convergents, dist_coset,
                       eval_enclosure, expand_interval)
from .exact import ceil_rational_power, compare_products
from .forge import (Extension, SeededPrefix, choose_rational_angle, extend_nonfinite,
                    growth_rule_quotient, seed_congruent_prefix)
from .pair import CrossCheck, float_cross_check, make_pair

__all__ = [
    "ContinuedFraction", "RationalInterval", "convergents", "dist_coset", "eval_enclosure",
    "expand_interval", "ceil_rational_power", "compare_products", "Extension", "SeededPrefix",
    "choose_rational_angle", "extend_nonfinite", "growth_rule_quotient", "seed_congruent_prefix",
    "NonFinitenessCertificate", "PairParams", "VerificationReport", "Witness", "global_delta",
    "verify_certificate", "CrossCheck", "float_cross_check", "make_pair",
]
