#!/usr/bin/env python3
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

"""Regenerates golden/cycles_per_output.json.

The reference numbers are a host CPU cost in cycles per output element and
the speedup of each macro over that CPU. The expected macro cost is their
quotient.
"""

import argparse
import json
import pathlib

# key, CPU cycles/output, speedup
REFERENCE = [
    ("caesar:matmul/w8/8x8x1024", 112.0, 28.0),
    ("carus:matmul/w8/8x8x1024", 112.0, 53.9),
    ("carus:relu/w8/16384", 13.0, 99.6),
    ("caesar:add/w8/8192", 4.0, 8.0),
]
TOL = 0.15


def derive():
    entries = []
    for key, cpu, speedup in REFERENCE:
        entries.append({
            "key": key,
            "value": round(cpu / speedup, 4),
            "tol": TOL,
            "cpu_cycles_per_output": cpu,
            "speedup": speedup,
        })
    return {
        "schema": 1,
        "description": "Cycles per output derived as CPU cycles/output divided by speedup.",
        "metric": "cycles_per_output",
        "entries": entries,
    }


def main():
    here = pathlib.Path(__file__).resolve().parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--output",
                        default=str(here.parent / "golden" / "cycles_per_output.json"))
    parser.add_argument("--check", action="store_true",
                        help="fail if the output file differs from the derivation")
    args = parser.parse_args()
    text = json.dumps(derive(), indent=2) + "\n"
    out = pathlib.Path(args.output)
    if args.check:
        if out.read_text() != text:
            raise SystemExit(f"{out} is stale; rerun without --check")
        return
    out.write_text(text)


if __name__ == "__main__":
    main()
