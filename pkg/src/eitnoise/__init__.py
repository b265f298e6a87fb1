"""Quadrature-noise spectra of squeezed light in a two-mode cavity filled
with three-level Lambda atoms under electromagnetically induced
transparency."""

__version__ = "0.1.0"

from .errors import (ClosedFormDomainError, ClosedFormUnavailable,
                     DegenerateSteadyState, EigenFailure, EitNoiseError,
                     NoConvergence, NoExtrema, NonStationaryState,
                     ScenarioError, SingularAtFrequency, SingularLyapunov)
from .model import (SqueezeSpec, SteadyState, SystemParams, ValidationReport,
                    VARIABLES, CONJUGATE_INDEX, cnumber_rhs,
                    solve_steady_state, steady_state_residual,
                    validate_params)
from .linearize import (FluctuationSystem, StabilityReport, build_diffusion,
                        build_drift, conjugation_permutation,
                        lyapunov_covariance, stability_check)
from .spectra import (SpectrumRequest, SpectrumResult, closed_form_correlation,
                      closed_form_probe, closed_form_pump, evaluate_spectra,
                      output_correlation_noise, output_quadrature_noise,
                      pair_correlation_matrix, probe_excess_term,
                      probe_input_noise, quadrature_brackets, spectrum_matrix)
from .analysis import (DGCZ_BOUND, DgczGrid, DgczReport, ExtremaReport,
                       Extremum, TransferReport, dgcz_functional, dgcz_scan,
                       find_extrema, gamma_cross_sensitivity,
                       inner_extremum_position, inner_pump_value,
                       inner_probe_value, inner_validity,
                       outer_extremum_position, outer_pump_value,
                       outer_probe_value, outer_validity, transfer_report)
from .scenarios import (Scenario, load_dgcz_grid, load_scenario,
                        parse_dgcz_grid, parse_scenario,
                        resolve_scenario_path, scenario_hash)

__all__ = [name for name in dir() if not name.startswith("_")]
