"""Seeded Monte Carlo verification harness: suites, sweeps, reports, CLI."""

from .generators import Generators, trial_rng
from .report import emit_report, emit_sweep, load_report
from .suites import CampaignConfig, CampaignReport, run_suite
from .sweeps import sweep_tightness
from .verdict import INCONCLUSIVE, PASS, VIOLATION, BoundVerdict, SweepRow, classify, exit_code, summarize
