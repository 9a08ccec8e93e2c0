"""Monitoring services"""
from stlstar.services.boolean_monitor import boolean_monitor, baseline_monitor
from stlstar.services.robustness_engine import robustness_engine
from stlstar.services.monitor_service import monitor_service

__all__ = [
    "boolean_monitor",
    "baseline_monitor",
    "robustness_engine",
    "monitor_service",
]
