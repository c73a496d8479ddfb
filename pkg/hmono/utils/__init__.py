"""Shared utilities for the check suites."""

from hmono.utils.io import console, read_points_csv, write_json, write_output
from hmono.utils.maps import DiscreteMap, as_points
from hmono.utils.numerics import fd_jacobian, invert_interpolation, unit_ball_volume
from hmono.utils.sampling import ball_points, ball_rule, sphere_rule
from hmono.utils.transforms import stack_frames, summary_frame
from hmono.utils.types import CheckOutcome, CheckStatus, RunContext
from hmono.utils.validators import require_valid, validate_dataframe
