"""Adaptive flow-aware multipath tunnel scheduling experiments."""

from .metrics import MetricsRecord, goodput_series, write_csv
from .scenario import ScenarioConfig, run_scenario
from .sched import (FlowId, FlowTable, FlowTableEntry, RoundRobinState,
                    SchedDecision, SubtunnelStats, afmt_schedule,
                    applicable_subtunnels, flow_id_of, flow_table_evict,
                    rr_schedule, select_adaptively)

__all__ = [
    "FlowId", "FlowTable", "FlowTableEntry", "RoundRobinState",
    "SchedDecision", "SubtunnelStats", "afmt_schedule",
    "applicable_subtunnels", "flow_id_of", "flow_table_evict",
    "rr_schedule", "select_adaptively",
    "MetricsRecord", "goodput_series", "write_csv",
    "ScenarioConfig", "run_scenario",
]

__version__ = "0.1.0"
