"""Configuration, scenario orchestration and output files."""

from tdhfbench.runner.config import ConfigError, RunConfig, load_config, parse_config
from tdhfbench.runner.output import emit_outputs
from tdhfbench.runner.scenarios import ScenarioResult, run_scenario

__all__ = ["ConfigError", "RunConfig", "ScenarioResult", "emit_outputs", "load_config", "parse_config", "run_scenario"]
