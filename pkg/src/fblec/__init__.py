"""Effective capacity and power allocation for finite-blocklength MTC links."""

from .capacity import (EcResult, EpsilonOptResult, Method, delay_outage_prob, ec_upper_bound,
                       effective_capacity, grid_optimal_epsilon, optimal_epsilon, psi_closed_form,
                       psi_oracle, shannon_ec, theta_upper_bound)
from .errors import (ConvergenceError, DegenerateAlpha, DomainError, FblecError, InfeasibleConstraint,
                     InfeasibleEc, NotUnimodal, NumericalInstability, QuadratureError)
from .power import (AsymptoticTerms, Binding, PowerAllocResult, asymptotic_F, ec_derivative,
                    optimal_power, power_saving_db, required_snr)
from .rate import (AuxParams, FadingModel, SystemParams, achievable_rate, channel_dispersion,
                   ec_kernel, shannon_capacity)
from .specfun import (gaussian_q, gaussian_q_inv, gen_exp_integral, lambert_w0, upper_inc_gamma)

__version__ = "0.1.0"
