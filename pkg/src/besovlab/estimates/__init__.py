"""Numerical checks of the a-priori estimates: energies, budgets, commutators, decay, growth."""

from .budget import BudgetResult, block_budget_rhs, block_energy, block_energy_budget, budget_scan
from .commutators import (
    VARIANTS,
    CommutatorScanReport,
    bracket,
    commutator_scan,
    scan_all,
    scan_fields,
)
from .decay import (
    fit_decay_rate,
    gns_check,
    gns_scan,
    grad_m_decay_check,
    vorticity_decay_check,
)
from .diagnostics import (
    EPS,
    EPS_PRIME,
    DiagnosticsRecord,
    critical_sigma,
    dissipation_functional,
    energy_from_block_sums,
    energy_functional,
    record_diagnostics,
    state_besov,
    time_derivative_state,
)
from .energy import MonotonicityReport, check_energy_monotonicity, cumulative_dissipation
from .growth import (
    fit_riccati_constant,
    local_time_bound,
    riccati_check,
    riccati_envelope,
    stability_divergence,
)
