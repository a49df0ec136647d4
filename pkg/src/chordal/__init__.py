"""Generalized chordal metric and robust strong stabilization over polydisc algebras."""

from .bounds import (
    BoundKind,
    Certificate,
    CertifiedBound,
    is_invertible,
    min_modulus_certified,
    sup_norm_certified,
    sup_norm_torus,
)
from .grid import PolydiscGrid, PolydiscPoint, TorusGrid, make_grid, polydisc_distance
from .metric import KappaEstimate, kappa, kappa_pointwise, kappa_sampled_only
from .plants import (
    BezoutError,
    ClosedLoop,
    CoprimePlant,
    CoprimenessError,
    PlantError,
    closed_loop,
    is_stabilized_by,
    make_plant,
)
from .robustness import (
    MarginReport,
    NotStabilizedError,
    RobustnessCertificate,
    Verdict,
    certify,
    empirical_theorem_test,
    example_controller,
    example_nominal,
    example_plant,
    example_sweep,
    margin,
    margin_formula,
)
from .series import (
    DimensionError,
    NeumannError,
    Series,
    gelfand_eval,
    l1_norm,
    lipschitz_constant,
    neumann_inverse,
    series_add,
    series_mul,
)
from .sphere import INFINITY, chordal, partington_bound, stereographic

__version__ = "0.1.0"
