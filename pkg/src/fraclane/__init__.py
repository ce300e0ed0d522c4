"""Truncated fractional power-series solutions of Lane-Emden-type equations
in the modified Riemann-Liouville calculus."""

from .catalog import all_entries, classical_reference, example_spec, get_entry
from .eqmodel import EquationSpec, Exp, Power, SourceTerm, parse_equation, spec_from_json, spec_to_json, validate
from .fracseries import FracSeries, evaluate, frac_deriv, frac_exp, frac_power, frac_product, linear_combine
from .gammafn import gamma, gamma_ratio, log_gamma
from .solver import ResidualReport, SeriesSolution, lhs_factor, residual, solve

__version__ = "0.1.0"
