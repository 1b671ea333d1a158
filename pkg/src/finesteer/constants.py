"""Numerical tolerances shared by the library, the CLI and the test-suite."""

import math

HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
EIG_TOL = 1e-10
NORM_TOL = 1e-12
BLOCH_TOL = 1e-10

PROB_TOL = 1e-12
DEGENERATE_TOL = 1e-12

VERDICT_SLACK = 1e-9
ORTHO_TOL = 1e-9
DISTINCT_ANGLE = 1e-6
NEGATIVITY_TOL = 1e-12

SQRT2 = math.sqrt(2.0)

# single-qubit game value for the sigma_z / sigma_x pair, 1/2 + 1/(2 sqrt 2)
FUR_MAX_ZX = 0.5 + 0.5 / SQRT2
SCENARIO1_BOUND = 2.0 * FUR_MAX_ZX
SCENARIO2_BOUND = 1.5
