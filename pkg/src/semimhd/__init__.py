"""Semi-implicit, divergence-free finite volume solver for viscous and resistive MHD."""

from .driver import FlowState, Model, StepReport, compute_dt, run, step_explicit_reference, step_semi_implicit
from .eos import IdealGas
from .errors import AdmissibilityError, ConfigError, SolverError
from .grid import PERIODIC, TRANSMISSIVE, Mesh1D, Mesh2D
from .problems import ProblemConfig, default_config, problem_ids
from .state import FluidParams

__version__ = "0.1.0"
