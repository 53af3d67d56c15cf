"""Plot-ready records for the EC-vs-SNR, power-delay and power-saving sweeps.

Each ``*_records`` function returns a list of flat dicts whose keys are the
fixed column names in ``*_COLUMNS``.  Cells that cannot be evaluated are kept
as records with ``status="infeasible"`` and empty numeric outputs, so the
vertical asymptotes of the power-delay curves stay visible in the data.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .capacity import Method, ec_upper_bound, effective_capacity, shannon_ec, theta_upper_bound
from .errors import DomainError, InfeasibleConstraint, InfeasibleEc
from .power import HighSnrValidityWarning, optimal_power, required_snr
from .rate import SystemParams

FIG2_COLUMNS = ("snr_db", "theta", "ec_closed_bpcu", "ec_oracle_bpcu", "ec_bound_bpcu",
                "ec_shannon_infinite_bpcu", "rel_err", "status", "message")
FIG3_COLUMNS = ("theta", "ce_bpcu", "snr_db_required", "theta_bound", "status", "message")
FIG4_COLUMNS = ("theta", "mu", "rho_max_db", "rho_star_db", "eta_db", "eta_ratio",
                "ec_at_star_bpcu", "ec_at_max_bpcu", "ec_loss_rel", "binding", "status", "message")

FIG2_THETAS = (0.001, 0.01, 0.1)
FIG3_CES = (0.5, 1.0, 1.5, 2.0)
FIG4_MUS = (0.0, 1e-3, 1e-2)
FIG4_RHO_MAX_DB = (20.0, 30.0)

SWEEP_VARIABLES = ("rho_db", "theta", "eps", "mu", "ce")


def db_to_linear(x_db):
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable; either ``step`` (linear spacing) or ``count`` is given."""

    variable: str
    start: float
    stop: float
    step: float = None
    count: int = None
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if not self.start < self.stop:
            raise DomainError(f"sweep needs start < stop, got {self.start} >= {self.stop}")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.step is None and self.count is None:
            raise DomainError("sweep needs a step or a count")
        if self.step is not None and not self.step > 0:
            raise DomainError(f"sweep step must be positive, got {self.step}")
        if self.count is not None and self.count < 2:
            raise DomainError(f"sweep count must be >= 2, got {self.count}")
        if self.spacing == "log" and not self.start > 0:
            raise DomainError("log spacing needs a positive start")

    def values(self):
        if self.spacing == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.count or 2)]
        if self.count is not None:
            return [float(v) for v in np.linspace(self.start, self.stop, self.count)]
        k = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return [self.start + i * self.step for i in range(k + 1)]


DEFAULT_FIG2_SNR = SweepSpec("rho_db", 0.0, 40.0, step=1.0)
DEFAULT_FIG3_THETA = SweepSpec("theta", 0.005, 0.05, count=40, spacing="log")
DEFAULT_FIG4_THETA = SweepSpec("theta", 0.005, 0.1, count=20, spacing="log")


def _record(columns, **values):
    row = dict.fromkeys(columns)
    row.update(values)
    return row


def fig2_records(n=500, eps=1e-4, thetas=FIG2_THETAS, snr_db=None):
    """EC vs SNR: closed form, quadrature oracle, high-SNR ceiling, infinite-blocklength EC."""
    snr_db = DEFAULT_FIG2_SNR.values() if snr_db is None else list(snr_db)
    rows = []
    for theta in thetas:
        bound = ec_upper_bound(n, theta, eps)
        for s in snr_db:
            rho = db_to_linear(s)
            p = SystemParams(n, eps, theta, rho)
            closed = effective_capacity(p, Method.CLOSED_FORM).ec
            oracle = effective_capacity(p, Method.ORACLE).ec
            rows.append(_record(
                FIG2_COLUMNS, snr_db=s, theta=theta, ec_closed_bpcu=closed,
                ec_oracle_bpcu=oracle, ec_bound_bpcu=bound,
                ec_shannon_infinite_bpcu=shannon_ec(n, theta, rho),
                rel_err=abs(closed - oracle) / oracle, status="ok", message=""))
    return rows


def fig3_records(n=500, eps=1e-4, ces=FIG3_CES, thetas=None):
    """Required SNR vs delay exponent for fixed-EC buffers."""
    thetas = DEFAULT_FIG3_THETA.values() if thetas is None else list(thetas)
    rows = []
    for ce in ces:
        tb = theta_upper_bound(n, ce, eps)
        for theta in thetas:
            try:
                rho = required_snr(ce, n, theta, eps)
            except (InfeasibleEc, InfeasibleConstraint) as exc:
                rows.append(_record(FIG3_COLUMNS, theta=theta, ce_bpcu=ce, theta_bound=tb,
                                    status="infeasible", message=str(exc)))
                continue
            rows.append(_record(FIG3_COLUMNS, theta=theta, ce_bpcu=ce,
                                snr_db_required=linear_to_db(rho), theta_bound=tb,
                                status="ok", message=""))
    return rows


def fig4_records(n=500, eps=1e-4, thetas=None, mus=FIG4_MUS, rho_max_db=FIG4_RHO_MAX_DB):
    """Power saving and the accompanying EC loss vs delay exponent."""
    thetas = DEFAULT_FIG4_THETA.values() if thetas is None else list(thetas)
    rows = []
    for rmax_db in rho_max_db:
        for mu in mus:
            for theta in thetas:
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always", HighSnrValidityWarning)
                    try:
                        r = optimal_power(n, theta, eps, mu, db_to_linear(rmax_db))
                    except InfeasibleConstraint as exc:
                        rows.append(_record(FIG4_COLUMNS, theta=theta, mu=mu, rho_max_db=rmax_db,
                                            status="infeasible", message=str(exc)))
                        continue
                status, message = "ok", ""
                if caught:
                    status, message = "warning", str(caught[0].message)
                rows.append(_record(
                    FIG4_COLUMNS, theta=theta, mu=mu, rho_max_db=rmax_db,
                    rho_star_db=linear_to_db(r.rho_star), eta_db=r.eta_db,
                    eta_ratio=r.rho_max / r.rho_star, ec_at_star_bpcu=r.ec_at_star,
                    ec_at_max_bpcu=r.ec_at_max, ec_loss_rel=r.ec_loss_rel,
                    binding=r.binding.value, status=status, message=message))
    return rows
