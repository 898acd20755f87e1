"""Shift Bribery for multiwinner elections: rules, solvers, hardness constructions."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"

from .bribery import (
    SolverReport,
    choose_strategy,
    dispatch_solver,
    solve_fpt_as,
    solve_kborda_levels,
    solve_oracle,
    solve_sntv_bloc,
    solve_subset_all_or_nothing,
    solve_subset_approval,
    solve_xp_shifts,
    solve_xp_voters,
)
from .bribery_ilp import solve_ilp_candidates
from .election import (
    AllOrNothingPrice,
    BriberyInstance,
    BriberySolution,
    Election,
    ShiftAction,
    TablePrice,
    UnitPrice,
    Voter,
    action_cost,
    apply_shift,
)
from .errors import (
    BriberyError,
    InstanceTooLarge,
    InvalidThreshold,
    NoApplicableSolver,
    ParseError,
    PreconditionViolated,
    ShiftOutOfRange,
    WrongPriceKind,
    WrongRule,
)
from .reductions import (
    Graph,
    SetCoverInput,
    gen_borda_from_mis,
    gen_greedy_approval_cc_from_setcover,
    gen_kborda_from_clique,
)
from .rules import RuleSpec, greedy_cc, is_member, ptas_threshold, winning_committee
from .textio import format_election, format_instance, parse_election, parse_instance

__all__ = [name for name in dir() if not name.startswith("_") and name not in ("version", "PackageNotFoundError")]
