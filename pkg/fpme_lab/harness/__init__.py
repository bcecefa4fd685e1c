from fpme_lab.harness.cache import ResultCache, default_cache_dir, parameter_hash
from fpme_lab.harness.config import (
    MODES,
    ExperimentConfig,
    InvarianceSettings,
    OperatorSettings,
    RatesAuditSettings,
    SolverSettings,
    config_from_parser,
    load_config,
)
from fpme_lab.harness.readers import FileLocator, FileReader, ini_reader, json_reader
from fpme_lab.harness.report import Check, ExperimentReport, emit_report, load_report, write_timing
from fpme_lab.harness.suites import (
    SUITES,
    StageClock,
    run_hydro_study,
    run_invariance_suite,
    run_operator_suite,
    run_pde_suite,
    run_rates_audit,
)

__all__ = [
    "MODES",
    "ExperimentConfig",
    "SolverSettings",
    "InvarianceSettings",
    "OperatorSettings",
    "RatesAuditSettings",
    "config_from_parser",
    "load_config",
    "FileLocator",
    "FileReader",
    "ini_reader",
    "json_reader",
    "ResultCache",
    "default_cache_dir",
    "parameter_hash",
    "Check",
    "ExperimentReport",
    "emit_report",
    "load_report",
    "write_timing",
    "StageClock",
    "SUITES",
    "run_hydro_study",
    "run_invariance_suite",
    "run_operator_suite",
    "run_pde_suite",
    "run_rates_audit",
]
