# Copyright 2026 The tncpt Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Ride-hailing / public-transit trip relationship analysis."""

import json

from tncpt._core import (
    BoostModel,
    ConfigError,
    Error,
    HexGrid,
    InputError,
    InvariantError,
    Planner,
    dump_config,
    fit,
    normalize_label,
    partial_dependence,
    shap_values,
    vif,
    vif_filter,
)
from tncpt import _core

STAGES = ("ingest", "plan", "classify", "gridify", "features", "train",
          "explain", "elasticity", "report")


def run(stage, config="", overrides=(), seed=0):
    """Runs one pipeline stage and returns its summary as a dict."""
    return json.loads(_core.run_stage(stage, str(config), list(overrides), seed))


def synth(out_dir, seed=1, spec="", overrides=(), fare_share=None):
    """Writes a synthetic scenario plus config.yaml; returns the summary."""
    return json.loads(
        _core.synth(str(out_dir), seed, str(spec), list(overrides), fare_share))


def plan(planner, origin, destination):
    """Transit alternative between two (lon, lat) points, as a dict."""
    return json.loads(planner.plan_json(origin[0], origin[1], destination[0],
                                        destination[1]))


__all__ = [
    "BoostModel", "ConfigError", "Error", "HexGrid", "InputError",
    "InvariantError", "Planner", "STAGES", "dump_config", "fit",
    "normalize_label", "partial_dependence", "plan", "run", "shap_values",
    "synth", "vif", "vif_filter",
]
