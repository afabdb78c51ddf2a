"""Numeric flow - floating residual minimization as a cross-check of exact verdicts."""

from .flow import FlowConfig, FlowModel, FlowResult, residual_minimize

__all__ = ["FlowConfig", "FlowModel", "FlowResult", "residual_minimize"]
