"""Universal machines over m registers and the schedules that drive them."""

from .base import LAST, PARALLEL, Schedule, ScheduleBuilder, SparseState, UniversalMachine
from .compact import (complete_compact, compact_universal, emit_compact, emit_complete, emit_simple,
                      simple_compact_universal)
from .elementary import elementary_universal, emit_elementary
from .fast import emit_fast, fast_universal
from .maxtime import all_diff_ordering, catalog_from_ordering, complete_max_time, emit_max, max_time_length
from .mintime import complete_min_time, emit_enumeration, pass_length
from .quasi import emit_qp, quasi_parallel

__all__ = [
    "LAST", "PARALLEL", "Schedule", "ScheduleBuilder", "SparseState", "UniversalMachine",
    "all_diff_ordering", "catalog_from_ordering", "compact_universal", "complete_compact",
    "complete_max_time", "complete_min_time", "elementary_universal", "emit_compact", "emit_complete",
    "emit_elementary", "emit_enumeration", "emit_fast", "emit_max", "emit_qp", "emit_simple",
    "fast_universal", "max_time_length", "pass_length", "quasi_parallel", "simple_compact_universal",
]
