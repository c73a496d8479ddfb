"""Transport suite: exact assignments, oracles and the analytic map zoo."""

import pandas as pd

from hmono.checks.transport.assignment import (
    Assignment,
    assignment_map,
    cost_matrix,
    random_instance,
    rearrangement_1d,
    solve_bruteforce,
    solve_exact,
)
from hmono.checks.transport.ingest import read_map_csv, read_point_cloud
from hmono.checks.transport.models import ASSIGNMENT_SCHEMA
from hmono.checks.transport.zoo import ZOO, analytic_zoo, zoo_closure
from hmono.utils.validators import require_valid


def assignment_table(x, y, c, assignment: Assignment) -> pd.DataFrame:
    """Per-source rows of the assignment with the cost each pair contributes."""
    matrix = cost_matrix(x, y, c)
    frame = pd.DataFrame(
        {
            "source": range(len(assignment.permutation)),
            "target": assignment.permutation,
            "cost": [matrix[i, j] for i, j in enumerate(assignment.permutation)],
        }
    )
    return require_valid(frame, ASSIGNMENT_SCHEMA, "assignment table")
