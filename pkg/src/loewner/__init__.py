"""Numerical toolkit for Loewner evolution in one complex variable.

Four families of tools share a small geometric core:

* ``radial``   -- disc flows driven by a unimodular function, their chains,
                  truncated power-series jets, and the reverse flow.
* ``chordal``  -- half-plane flows driven by a real function, exact
                  per-cell hull maps, traces, and capacity estimates.
* ``generators`` -- autonomous and time-dependent vector fields on the
                  disc: admissibility tests, fixed-point factorization,
                  semiflows, product formulas.
* ``coefficients`` / ``loewner_range`` -- chain coefficient quadrature with
                  sharp bounds, and decay-based range classification.

The chordal inner loops run on a compiled extension when it is available;
set ``LOEWNER_BACKEND=python`` to force the plain numpy fallback, or
``LOEWNER_BACKEND=cython`` to insist on the compiled one.
"""

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("loewner")
except _metadata.PackageNotFoundError:
    __version__ = "0.1.0"

from ._backend import backend_name
from .chordal import (HcapEstimate, TracePolyline, UpflowOutcome,
                      chordal_sle_trace, default_seed_height, down_step,
                      hcap_estimate, inverse_map, solve_upward, trace,
                      up_step)
from .coefficients import (CoefficientResult, a2_quadrature, a3_quadrature,
                           bieberbach_verify, coeffs_from_jet,
                           herglotz_coeffs)
from .driving import (BrownianPath, DrivingTerm, brownian_driving,
                      make_constant, make_sqrt, make_table,
                      radial_sle_driving)
from .errors import (ArgumentError, BranchError, ConvergenceError,
                     DecompositionError, DrivingError, IntegrationError,
                     LoewnerError, NumericalError, SwallowedError)
from .fieldexpr import compile_field, parse_field
from .generators import (DecompositionResult, FieldSpec, GeneratorVerdict,
                         ProductFormulaResult, berkson_porta,
                         commutation_check, extract_a_q, general_evolve,
                         generator_test, herglotz_eval, herglotz_field,
                         orbit_contraction_check, product_formula_check,
                         semigroup_point)
from .geometry import (cayley, disc_grid, inverse_cayley, kobayashi_disc,
                       mobius, poincare_distance)
from .jets import Jet, jet_div, jet_mul, jet_scale
from .loewner_range import (RangeVerdict, beta_estimate, classify_range)
from .radial import (ChainValue, FlowOutcome, chain_jet, chain_point, evolve,
                     evolve_jet, radial_field, radial_sle_flow,
                     reverse_evolve)

__all__ = [
    "__version__", "backend_name",
    # errors
    "LoewnerError", "ArgumentError", "DrivingError", "NumericalError",
    "IntegrationError", "ConvergenceError", "BranchError", "SwallowedError",
    "DecompositionError",
    # geometry and jets
    "mobius", "poincare_distance", "kobayashi_disc", "cayley",
    "inverse_cayley", "disc_grid", "Jet", "jet_mul", "jet_div", "jet_scale",
    # driving terms
    "DrivingTerm", "BrownianPath", "make_constant", "make_sqrt",
    "make_table", "brownian_driving", "radial_sle_driving",
    # radial flows
    "radial_field", "evolve", "evolve_jet", "chain_point", "chain_jet",
    "reverse_evolve", "radial_sle_flow", "ChainValue", "FlowOutcome",
    # chordal flows
    "up_step", "down_step", "solve_upward", "inverse_map", "trace",
    "hcap_estimate", "chordal_sle_trace", "default_seed_height",
    "TracePolyline", "UpflowOutcome", "HcapEstimate",
    # vector fields
    "FieldSpec", "GeneratorVerdict", "DecompositionResult",
    "ProductFormulaResult", "generator_test", "extract_a_q", "berkson_porta",
    "semigroup_point", "orbit_contraction_check", "herglotz_field",
    "herglotz_eval", "general_evolve", "product_formula_check",
    "commutation_check", "compile_field", "parse_field",
    # coefficients and range
    "CoefficientResult", "herglotz_coeffs", "a2_quadrature", "a3_quadrature",
    "bieberbach_verify", "coeffs_from_jet", "RangeVerdict", "beta_estimate",
    "classify_range",
]
