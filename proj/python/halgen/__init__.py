# Copyright (c) 2026 halgen contributors
#
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the halgen C++ core."""

import json

try:
    from ._halgen import (ConfigError, HalgenError, IoError, SimSetupError, SourceError, _complete_json,
                          _simulate_json, analyze, embed, normalize_tokens, pretty_print, run_cli,
                          token_similarity)
except ImportError:  # in-tree build: the extension sits next to the package
    from _halgen import (ConfigError, HalgenError, IoError, SimSetupError, SourceError, _complete_json,
                         _simulate_json, analyze, embed, normalize_tokens, pretty_print, run_cli,
                         token_similarity)

__all__ = [
    "ConfigError", "HalgenError", "IoError", "SimSetupError", "SourceError", "analyze", "complete", "embed",
    "normalize_tokens", "pretty_print", "run_cli", "simulate", "token_similarity",
]


def complete(project_dir, out_dir="", kb_dir="", hal_unit="hal.c"):
    """Complete a project with the knowledge-base backend and return the report."""
    return json.loads(_complete_json(str(project_dir), str(out_dir), str(kb_dir), hal_unit))


def simulate(project_dir, scenario_path, strict=True, hal_unit="hal.c"):
    """Run a closed project against a scenario and return the verdict."""
    return json.loads(_simulate_json(str(project_dir), str(scenario_path), strict, hal_unit))
