# Copyright (c) 2026 halgen contributors
#
# SPDX-License-Identifier: Apache-2.0

import math
import os
import pathlib
import shutil

import pytest

import halgen

DATA = pathlib.Path(os.environ.get("HALGEN_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))
DEMO = DATA / "demo"


def test_pretty_print_round_trip():
    src = "uint32_t f(uint32_t a){return a+1;}"
    once = halgen.pretty_print(src)
    assert halgen.pretty_print(once) == once


def test_parse_error_is_typed():
    with pytest.raises(halgen.SourceError):
        halgen.pretty_print("int f( {")
    assert issubclass(halgen.SourceError, halgen.HalgenError)


def test_similarity_and_tokens():
    assert halgen.token_similarity("x = 1;", "count = 0xFF;") == 1.0
    assert halgen.normalize_tokens("x = 1;") == halgen.normalize_tokens("y = 2;")
    assert halgen.token_similarity("x = 1;", "while (x) { }") < 1.0


def test_embed_is_unit_length():
    v = halgen.embed("GPIO_ODR |= pin_mask;")
    assert len(v) == 256
    assert math.isclose(math.sqrt(sum(x * x for x in v)), 1.0, rel_tol=1e-12)
    assert not any(halgen.embed(""))


def test_analyze_complete_simulate(tmp_path):
    assert halgen.analyze(str(DEMO)) == []
    gap = tmp_path / "gap"
    shutil.copytree(DEMO, gap)
    hal = (gap / "hal.c").read_text()
    start = hal.index("void hal_gpio_toggle")
    end = hal.index("\n}\n", start) + 3
    (gap / "hal.c").write_text(hal[:start] + hal[end:])
    missing = halgen.analyze(str(gap))
    assert [m["name"] for m in missing] == ["hal_gpio_toggle"]
    assert missing[0]["arity"] == 2

    report = halgen.complete(gap, tmp_path / "done", DATA / "kb")
    assert report["closed"] is True
    assert report["total_calls"] == 1

    verdict = halgen.simulate(tmp_path / "done", DEMO / "scenario.json")
    assert verdict["passed"] is True
    assert verdict["usart_log"] == "PASS\n"
    with pytest.raises(halgen.SimSetupError):
        halgen.simulate(gap, DEMO / "scenario.json")


def test_cli_in_process():
    code, out, _ = halgen.run_cli(["analyze", str(DEMO)])
    assert code == 0
    assert out == ""
    assert halgen.run_cli(["bogus"])[0] == 64
