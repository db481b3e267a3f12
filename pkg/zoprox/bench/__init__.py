"""Experiment harness. Submodules are imported directly; the reductions use
:mod:`zoprox.bench.switch` and the runner uses the reductions."""
