"""Min-max multiple traveling salesmen via path generation and optimal splitting.

The library separates the problem into two halves: generators that order
all cities into a single path (random, nearest-neighbor, 2-opt, or a
learned attention/LSTM policy), and a binary-search splitter that cuts any
path into at most m depot-anchored tours whose worst cost is within a
configurable epsilon of the best possible cut.  Exact brute-force oracles
for the splitter, a REINFORCE trainer for the policy, and an evaluation
bench (best-of-k protocols, Wilcoxon tests, saturation scans) round out
the toolkit.
"""

from .instance import (
    DistributionKind,
    Instance,
    ParseError,
    Point,
    distance,
    generate,
    instance_to_text,
    read_instance,
    write_instance,
)
from .tours import (
    Solution,
    Tour,
    ValidationError,
    Violation,
    check_path,
    objective,
    path_to_single_tour,
    read_solution,
    require_valid,
    solution_from_tours,
    tour_cost,
    validate,
    write_solution,
)
from .splitting import (
    SplitConfig,
    SplitPlan,
    greedy_check,
    optimal_split,
    oracle_decision_enum,
    oracle_split_dp,
    path_upper_bound,
    recover_plan,
    split_costs_batch,
)

__version__ = "0.1.0"
