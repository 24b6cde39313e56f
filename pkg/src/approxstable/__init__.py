"""Linear-time 3/2-approximate maximum stable matchings with ties, one-to-one and b-matching."""
from .asbm import WAgentBook, solve_b, worst_matched
from .audit import (AuditReport, Certificate, DangerousPath, InvalidMatching, approx_certificate,
                    audit, find_blocking_pairs, find_dangerous_paths)
from .events import Counters, Event, format_event
from .formats import (ParseError, parse_instance, parse_matching, serialize_instance,
                      serialize_matching)
from .generate import GenParams, paper_example, random_instance
from .gs_modified import CapacityNotOne, SolveResult, gale_shapley_baseline, solve
from .model import (AgentId, Instance, Matching, Side, ValidationError, ValidationKind,
                    is_valid_matching, left, rank, right, validate)
from .oracle import OracleResult, SizeLimitExceeded, optimal_stable, ratio_check
from .schedule import ScheduleError, SchedulePolicy

__all__ = [
    "AgentId", "AuditReport", "CapacityNotOne", "Certificate", "Counters", "DangerousPath",
    "Event", "GenParams", "Instance", "InvalidMatching", "Matching", "OracleResult",
    "ParseError", "ScheduleError", "SchedulePolicy", "Side", "SizeLimitExceeded", "SolveResult",
    "ValidationError", "ValidationKind", "WAgentBook", "approx_certificate", "audit",
    "find_blocking_pairs", "find_dangerous_paths", "format_event", "gale_shapley_baseline",
    "is_valid_matching", "left", "optimal_stable", "paper_example", "parse_instance",
    "parse_matching", "random_instance", "rank", "ratio_check", "right", "serialize_instance",
    "serialize_matching", "solve", "solve_b", "validate", "worst_matched",
]
