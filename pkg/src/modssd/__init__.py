"""Modular subsystem decomposition of a bosonic mode.

Splits a continuous-variable mode into a logical qudit and a gauge mode via
modular position, extracts reduced logical states by gauge traces, and
quantifies encoding and teleportation damage for GKP qubits through
closed-form theta expressions validated against quadrature.
"""

from .errors import (
    AccuracyError,
    AliasingError,
    BudgetError,
    ConvergenceError,
    DegenerateStateError,
    DomainError,
    FormulaInconsistencyError,
    ModssdError,
    SchemaError,
)
from .modular import (
    GaugeTraceGrid,
    SsdLabels,
    SsdParams,
    bloch_vector,
    decompose_real,
    eval_subsystem,
    gauge_trace_kernel_numeric,
    gauge_trace_numeric,
    logical_fidelity,
    logical_pauli,
    purity,
    qubit_state,
    recompose,
    reduced_gauge_numeric,
    split_integer,
    ssd_labels,
    trace_distance,
)
from .special import (
    ThetaTruncation,
    db_to_zeta,
    gaussian,
    gaussian_comb,
    jacobi_theta,
    siegel_theta,
    tau_factor,
    zeta_to_db,
)
from .states import (
    ApproxGkpParams,
    approx_gkp_logical,
    approx_gkp_wf,
    bloch_angles_to_amplitudes,
    squeezed_vacuum_logical,
    squeezed_vacuum_wf,
)
from .wavefunctions import (
    ApproxGkp,
    GridWavefunction,
    SqueezedVacuum,
    TeleportedGkp,
    sample_to_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
