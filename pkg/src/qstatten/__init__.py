"""Monte Carlo study of state tomography through lossy fiber."""

__version__ = "0.1.0"

from .channel import (  # noqa: E402
    FiberSpec,
    RngStream,
    TransmissionDraw,
    draw_measured_counts,
    draw_transmitted,
    expected_counts,
    round_half_up,
    survival_probability,
)
from .errors import (  # noqa: E402
    ConfigError,
    DegenerateParametersError,
    InvalidArgumentError,
    MetricRangeError,
    NotPsdError,
    QstattenError,
)
from .estimator import (  # noqa: E402
    ReconstructionOptions,
    ReconstructionResult,
    ls_objective,
    params_to_density,
    reconstruct,
)
from .experiment import (  # noqa: E402
    ScenarioConfig,
    SweepResult,
    load_scenarios,
    run_bipartite_sweep,
    run_single_sweep,
    run_sweep,
    threshold_contour,
    write_results,
)
from .metrics import (  # noqa: E402
    MetricValue,
    chsh_violation_possible,
    concurrence,
    fidelity,
    negativity,
)
from .povm import PovmSet, product_povm, sic_povm, validate_povm  # noqa: E402
from .states import (  # noqa: E402
    StateSample,
    bloch_qubit,
    phase_sample,
    phi_family,
    qubit_sample,
    qutrit_grid,
    theta_family,
)
