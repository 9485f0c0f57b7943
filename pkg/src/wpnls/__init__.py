"""Wave packet transforms, Gaussian window calculus, Schrodinger propagators
and H^s microlocal regularity detectors on periodic grids."""

from .errors import (
    BlowUpError,
    DegenerateInputError,
    FrequencyRangeError,
    GridMismatchError,
    ResolutionError,
    SizingError,
    WpnlsError,
)
from .grid import (
    Field,
    Grid,
    SobolevParams,
    field_from_function,
    fourier,
    inner_product,
    inverse_fourier,
    l2_norm,
    make_grid,
    read_field,
    weighted_sobolev_norm,
    write_field,
)
from .windows import (
    NonlinearityPowers,
    WindowSpec,
    evaluate_window,
    nonlinear_pairing,
    pairing_lower_bound_check,
    window_self_wpt,
    window_values,
)
from .wavepacket import (
    WPTSlice,
    adjoint_wpt,
    conjugation_identity_check,
    invert_wpt,
    plancherel_ratio,
    window_change_bound_check,
    wpt,
    wpt_full,
)
from .schrodinger import (
    Trajectory,
    conservation_report,
    duhamel_residual,
    free_propagate,
    load_trajectory,
    nls_solve,
    save_trajectory,
)
from .microlocal import (
    CriterionCurve,
    CriterionParams,
    PhasePoint,
    cone_fourier_detect,
    theorem2_experiment,
    transported_criterion,
    verdict_fit,
    wavepacket_detect,
)

__version__ = "0.1.0"
