# Copyright 2026 The nmcsim Authors
#
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

"""Python front end for the nmcsim near-memory simulator."""

import json as _json

from ._nmcsim import (
    Fabric,
    NmcsimError,
    asm_caesar,
    asm_xvnmc,
    disasm_caesar,
    disasm_xvnmc,
    kernels,
    peak,
    suites,
    timing_presets,
)
from . import _nmcsim

__all__ = [
    "Fabric",
    "NmcsimError",
    "asm_caesar",
    "asm_xvnmc",
    "bench",
    "disasm_caesar",
    "disasm_xvnmc",
    "kernels",
    "peak",
    "run_kernel",
    "run_scenario",
    "suites",
    "timing_presets",
]


def run_kernel(device, kernel, shape, width=8, seed=1, preset="table-v",
               alpha=1, beta=1, shift=1):
    """Run one kernel on one device and verify it against the scalar oracle."""
    r = _nmcsim.run_kernel(device, kernel, width, list(shape), seed, preset,
                           alpha, beta, shift)
    r["events"] = _json.loads(r.pop("events_json"))
    return r


def run_scenario(text, base_dir="."):
    """Run a JSON scenario; returns the parsed result document."""
    if not isinstance(text, str):
        text = _json.dumps(text)
    return _json.loads(_nmcsim.scenario_json(text, base_dir))


def bench(suite="reference", preset="table-v", seed=1, threads=1):
    """Run a benchmark suite; returns the report document."""
    return _json.loads(_nmcsim.bench_json(suite, preset, seed, threads))
