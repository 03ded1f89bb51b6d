"""Scenario wiring: reference generation, closed-loop runs, reports and batches."""
