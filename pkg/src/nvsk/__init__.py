"""Sensitivity budgets for ensemble NV diamond magnetometers."""

__version__ = "0.1.0"

from .constants import constants, PhysicalConstants, ScalingConstants, SCALING, PPM_TO_CM3
from .errors import *  # noqa: F401,F403
from .samples import (DiamondSample, ProtocolParams, Protocol, Basis, load_sample,
                      save_sample)
from .reporting import save_report
from .hamiltonian import (FieldEnvironment, SpinHamiltonian, Nucleus, Branch, build_hamiltonian,
                          transition_frequencies_exact, transition_frequencies_perturbative,
                          reduce_to_pseudo_spin_half, stark_zeeman_analysis, jacobi_eigh)
from .spin_dynamics import (SpinState, ReadoutModel, Calibration, ramsey_expectation,
                            propagate_ramsey, fid_signal, hahn_echo_phase, monte_carlo_readout,
                            simulate_ramsey_counts, estimate_field, field_estimates)
from .readout import (sigma_r, sigma_r_from_contrast, noise_quotient, spin_projection_quotient,
                      fidelity)
from .sensitivity import (SensitivityReport, eta_spin_projection, eta_ramsey_exact,
                          eta_ramsey_shot, eta_cw_odmr, eta_pulsed_odmr, eta_hahn_echo,
                          eta_multipulse, k_opt, overhead_factor, cw_optimal_detuning)
from .dephasing import (DephasingBudget, BudgetEnvironment, LineShape, t2star_nitrogen,
                        t2_nitrogen, t2star_c13, t2star_nvnv, strain_electric_rate,
                        total_budget, lorentzian_fwhm, gaussian_sigma, t2star_from_epr_delta)
from .optimize import optimal_tau, enhancement, nitrogen_sweep, init_power, kappa
from .materials import vacancy_diffusion, irradiation_dose
