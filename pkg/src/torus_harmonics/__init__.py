"""Fourier partial sums, conjugates, maximal functions and Orlicz norms on discrete tori."""
from ._parallel import get_threads, set_threads
from .catalog import CATALOG, SUITE_1D, SUITE_2D, make_function, parse_function_id
from .config import ExperimentConfig
from .kernels import BACKEND
from .majorant import (MajorantField, exceptional_set, lemma2_envelope, majorant,
                       majorant_1d, majorant_2d)
from .orlicz import OrliczIndex, log_k_value, luxemburg_norm, orlicz_integral
from .singular import (DEFAULT_SCHEME, PvQuadratureScheme, UTypeSpec, conjugate_1d,
                       conjugate_axis, conjugate_dd, diagonal_conjugate, diagonal_pv,
                       g_field, hl_maximal_1d, u_type_operator)
from .spectral import (FrequencyWindow, coefficients, conjugate_rectangular_partial_sum,
                       conjugate_square_partial_sum, dirichlet_kernel,
                       modified_square_partial_sum, rectangular_partial_sum,
                       spectral_conjugate, square_partial_sum)
from .torus import GridMask, SampledField, TorusGrid, integrate, lp_norm, make_grid, sample
from .verify import (VerificationReport, calibrate_c1, convergence_in_measure,
                     exceptional_exp_sweep, exp_integral, exp_mean_convergence, lemma2_gap,
                     log_growth_check, phi_modulus_decay, sweep_exp_bound)

__version__ = "0.1.0"
