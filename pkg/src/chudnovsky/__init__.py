"""Interpolation-based bilinear multiplication algorithms for extensions of finite fields."""
from .errors import *  # noqa: F401,F403
from .field_core import (FieldConfig, FieldElement, Poly, field_make, format_element,
                         format_poly, irreducibles, parse_element, parse_poly, parse_qspec,
                         poly_is_irreducible, prime_field)
from .places import Place, count_places, enumerate_places, rational_places, residue_field
from .evaluation import (EvalPoint, EvalVector, eval_row_block, evaluate_spec, hasse_expansion,
                         leading_coeff, residue_at)
from .strategy import (InterpolationSpec, Strategy, build_spec, build_spec_deg, build_spec_div,
                       build_spec_opt, div_profile, nk_profile_deg, opt_plan, strategy_cost)
from .compiler import (CompiledAlgorithm, bilinear_complexity, compile_algorithm,
                       export_algorithm, export_json, import_algorithm, import_json)
from .runtime import (ExtElement, MultTrace, multiply, multiply_batch, oracle_multiply,
                      oracle_multiply_batch, verify)
from .bounds import bound_report, iterated_log, lemma2_check, theorem9_bound

__version__ = "0.1.0"
