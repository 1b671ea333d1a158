"""Fine-grained EPR-steering inequalities for qubits.

The steering functional P(b_P|a_S) + P(b_Q|a_T), its local-hidden-state
bounds, the single-qubit game behind them, comparison criteria (CHSH,
linear n-setting criterion), monogamy and one-sided DIQKD key-rate bounds.
"""

from .errors import DegenerateConditionError, FinesteerError, InvalidArgumentError, NumericalFailureError
from .measure import X, Y, Z, Direction, Outcome, conditional_prob, joint_prob, projector
from .statezoo import pure_alpha, pure_alpha_density, tripartite_family, werner
from .steering import (Scenario, SteeringSetting, SteeringVerdict, fur_game_max, fur_game_value,
                       scenario1_bound, scenario2_average, scenario2_average_mc, scenario2_bound,
                       steering_functional, verdict)

__version__ = "0.1.0"
