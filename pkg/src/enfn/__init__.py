"""Neo-fuzzy and extended neo-fuzzy neurons with online adaptive learning."""
from .errors import ConfigurationError, ShapeError
from .learning import (LearnerState, OnlineRun, Rule, StepOutcome, batch_least_squares,
                       checkpoint, restore, run_online, step)
from .membership import (Kind, MembershipGrid, bspline_activations, make_uniform_centers,
                         triangular_activations)
from .metrics import MetricRow, mse, rmse, smape
from .synapse import EnfnModel, ModelConfig, fuzzify, fuzzify_many

__version__ = "0.1.0"
