"""Numerical toolkit for planar harmonic mappings f = h + conj(g).

Evaluates boundary functionals built from the spherical derivative,
estimates their sup over the disk with trend verdicts, extracts
rescaling sequences at blow-up points, and checks fiber-based
normality criteria against direct estimates.
"""

from .catalog import CatalogEntry, builtin_catalog, catalog_maps, lookup
from .criteria import (CriterionReport, Fiber, NonNegPolynomial, check_lappan_poly,
                       check_min_spherical, check_thm_y, check_thm_ya,
                       cross_check, solve_fiber)
from .errors import (DomainError, ExprSyntaxError, HarmapError,
                     NegativeExponentError, NumericalError, SingularityError,
                     UndefinedDilatationError, UnknownIdentifierError)
from .funcexpr import (HoloFunction, Jet, backend_name, derivative, eval_jet,
                       evaluate as evaluate_holo, parse_expr, to_source)
from .harmonic import (HarmonicMap, RescaledMap, dilatation, evaluate,
                       extended_spherical_derivative, f_derivative,
                       is_sense_preserving, jacobian, load_map,
                       map_from_record, map_to_record,
                       precompose_automorphism, rescale, save_map,
                       spherical_derivative)
from .metrics import (chordal_distance, hyperbolic_distance,
                      lipschitz_quotient_estimate)
from .normality import (Phi, PhiValidation, SupEstimate, estimate_sup_normality,
                        estimate_sup_phi, normality_functional, parse_phi,
                        phi_normality_functional, phi_power, phi_table,
                        validate_phi)
from .zalcman import (F_value, ZalcmanSequence, ZalcmanStep, extract_sequence,
                      find_blowup_probes, solve_rescaling)

__version__ = "0.1.0"
