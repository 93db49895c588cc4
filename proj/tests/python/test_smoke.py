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


import json

import pytest

import nmcsim


def test_catalogue():
    assert "matmul" in nmcsim.kernels()
    assert "table-v" in nmcsim.timing_presets()
    assert "reference" in nmcsim.suites()


def test_caesar_round_trip():
    entries = nmcsim.asm_caesar("add 0x5, 0x10, 0x20")
    assert entries == [(0x5, 0x0C040010)]
    assert nmcsim.disasm_caesar(entries).strip() == "add 0x5, 0x10, 0x20"


def test_xvnmc_round_trip():
    words = nmcsim.asm_xvnmc("xvnmc.vadd.vv v2, v1, v0")
    assert words == [0x0010015B]
    assert nmcsim.asm_xvnmc(nmcsim.disasm_xvnmc(words)) == words


def test_errors_surface_as_exceptions():
    with pytest.raises(nmcsim.NmcsimError, match="ParseError"):
        nmcsim.asm_caesar("add 0x5, 0x10")
    with pytest.raises(nmcsim.NmcsimError, match="ProgramTooLarge"):
        nmcsim.asm_xvnmc("nop\n" * 129)


@pytest.mark.parametrize("device", ["caesar", "carus"])
def test_run_kernel_verifies(device):
    r = nmcsim.run_kernel(device, "gemm", [4, 5, 33], width=16, alpha=2, beta=-3)
    assert r["pass"], r["message"]
    assert r["output"] == r["expected"]
    assert r["outputs"] == 4 * 33
    assert r["cycles"] > 0
    assert r["events"]["macs"] > 0


def test_carus_matmul_cycles():
    r = nmcsim.run_kernel("carus", "matmul", [10, 10, 1024], width=8)
    assert abs(r["cycles"] - 26.6e3) / 26.6e3 <= 0.10


def test_peak():
    assert nmcsim.peak("caesar", 8)["macs_per_cycle"] == 2.0
    assert nmcsim.peak("carus", 8)["gops"] == pytest.approx(2.64)


def test_fabric_protocol():
    fab = nmcsim.Fabric()
    fab.write("caesar", 0x0000, 0x01020304)
    fab.write("caesar", 0x4000, 0x01010101)
    fab.set_mode("caesar", True)
    cycles = fab.stream("csrw 8\nadd 0x800, 0x0, 0x1000\n")
    assert 2 <= cycles <= 10
    fab.set_mode("caesar", False)
    assert fab.read("caesar", 0x2000) == 0x02030405

    fab.write("carus", 1024, 7)
    r = fab.run_carus("li x1, 1\nvsetvli x0, x1, e32\nxvnmc.vadd.vi v1, v1, 5\n"
                      "lui x13, 0x8\nsw x0, 0(x13)\n")
    assert r["kernel_cycles"] > 0
    assert fab.read("carus", 1024) == 12


def test_scenario():
    doc = {
        "device": "caesar",
        "steps": [
            {"op": "write", "addr": 0, "data": [5]},
            {"op": "expect", "addr": 0, "data": [5]},
        ],
    }
    result = nmcsim.run_scenario(doc)
    assert result["pass"] is True


def test_bench_smoke():
    report = nmcsim.bench("smoke")
    assert report["reports"]
    assert all(r["pass"] for r in report["reports"])
    json.dumps(report)
