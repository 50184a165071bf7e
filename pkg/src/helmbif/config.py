"""Single source of truth for numerical defaults.

Every tunable that affects output values lives here so that CLI flags,
service requests, and library calls share one documented set of defaults.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Defaults:
    # Dirichlet solver: number of symmetric Fourier-Bessel modes beyond the
    # radial one (basis k = 0, m, ..., modes*m) and boundary oversampling
    # factor (collocation points per sector M = oversample*(modes+1)).
    modes: int = 12
    oversample: int = 8
    # sup |u - 1| allowed on the offset validation grid.
    boundary_tol: float = 1e-9
    # Least-squares condition estimate above which a warning is attached.
    condition_limit: float = 1e12
    # Branch refinement: target RMS deviation of the normal derivative.
    refine_tol: float = 1e-9
    # Offset added to the bifurcation value for slope-control studies.
    control_offset: float = 0.3
    # Gauss-Newton safeguards.
    fd_step: float = 1e-6
    max_iterations: int = 40
    max_halvings: int = 8
    stagnation_step: float = 1e-14
    # Truncation for boundary cosine series produced by the field layer.
    trace_modes: int = 32
    # Figure sampling resolution (radial points; angular uses 2x).
    grid_n: int = 64


DEFAULTS = Defaults()
