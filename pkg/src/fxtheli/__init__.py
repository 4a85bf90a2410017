"""Fixed-time prescribed-performance control of a 2-DOF helicopter.

Subpackages are plain modules; the most used names are re-exported here.
"""

from .config import ConfigError, load_scenario, save_scenario
from .controller import Gains, InvariantError
from .envelope import Envelope, EnvelopeConfig, Family
from .fxtbounds import BoundProblem
from .plant import DisturbanceSpec, HeliState, PlantParams
from .powmath import OddRational, gamma_fn, sig
from .sim import Baseline, NumericFailure, Scenario, compute_metrics, run
from .ubf import EnvelopeViolation, UbfConfig, Variant

__version__ = "0.1.0"

__all__ = [
    "BoundProblem", "Baseline", "ConfigError", "DisturbanceSpec", "Envelope",
    "EnvelopeConfig", "EnvelopeViolation", "Family", "Gains", "HeliState",
    "InvariantError", "NumericFailure", "OddRational", "PlantParams", "Scenario",
    "UbfConfig", "Variant", "compute_metrics", "gamma_fn", "load_scenario", "run",
    "save_scenario", "sig",
]
