import json
import math

import pytest

from casimir_lab.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main, render, run, Table
from casimir_lab.config import ConfigError, parse_config
from casimir_lab.constants import HBAR_C
from casimir_lab.presets import PRESETS, preset

ENERGY_TOML = """
command = "energy"
system = "plates"
[geometry]
a = [0.5, 1.0]
[material]
kind = "ideal"
[temperature]
value = [0.0, 300.0]
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_energy_csv(tmp_path, capsys):
    assert main(["--config", write(tmp_path, ENERGY_TOML)]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "a_um,T_K,F_eV_per_um2"
    assert len(lines) == 5
    a, T, F = lines[3].split(",")
    assert (float(a), float(T)) == (1.0, 0.0)
    assert float(F) == pytest.approx(-math.pi**2 * HBAR_C / 720, rel=1e-6)


def test_json_output_file(tmp_path):
    out = tmp_path / "out.json"
    code = main(["--config", write(tmp_path, ENERGY_TOML), "--format", "json", "--output", str(out)])
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["a_um", "T_K", "F_eV_per_um2"]
    assert len(doc["rows"]) == 4


def test_threads_give_identical_bytes(tmp_path):
    text = ENERGY_TOML.replace('"energy"', '"breakdown"').replace('kind = "ideal"',
                                                                  'kind = "dielectric"\neps0 = 3.0')
    text = text.replace("value = [0.0, 300.0]", "value = [100.0, 300.0]")
    cfg = write(tmp_path, text)
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}.csv"
        assert main(["--config", cfg, "--threads", threads, "--output", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_thread_count_from_environment(monkeypatch):
    monkeypatch.setenv("CASIMIR_LAB_THREADS", "3")
    raw = {"command": "energy", "geometry": {"a": 1.0}, "material": {"kind": "ideal"},
           "temperature": {"value": 0.0}}
    assert parse_config(raw).threads == 3
    assert parse_config(raw, threads=2).threads == 2


@pytest.mark.parametrize("text", [
    'command = "bogus"\n[geometry]\na = 1.0\n[material]\nkind = "ideal"\n[temperature]\nvalue = 1.0\n',
    'command = "energy"\n[geometry]\na = -1.0\n[material]\nkind = "ideal"\n[temperature]\nvalue = 1.0\n',
    'command = "energy"\n[geometry]\na = 1.0\n[material]\nkind = "plasma"\n[temperature]\nvalue = 1.0\n',
    'command = "energy"\n[geometry]\na = 1.0\n[material]\nkind = "ideal"\ncolour = 1\n[temperature]\nvalue = 1.0\n',
    'command = "entropy-scan"\n[geometry]\na = 1.0\n[material]\nkind = "ideal"\n[temperature]\nvalue = [2.0, 1.0]\n',
    'command = "energy"\n[geometry\n',
])
def test_bad_config_exit_code(tmp_path, text):
    assert main(["--config", write(tmp_path, text)]) == EXIT_CONFIG


def test_unknown_preset_and_missing_arguments():
    assert main(["--preset", "nope"]) == EXIT_CONFIG
    assert main([]) == EXIT_CONFIG


def test_numerical_failure_exit_code(tmp_path, monkeypatch, capsys):
    from casimir_lab import cli
    from casimir_lab.errors import NonConvergence

    def boom(cfg, pool):
        raise NonConvergence("did not converge", node={"l": 7})

    monkeypatch.setitem(cli.COMMANDS, "energy", boom)
    assert main(["--config", write(tmp_path, ENERGY_TOML)]) == EXIT_NUMERIC
    assert "node" in capsys.readouterr().err


def test_presets_parse():
    for name in PRESETS:
        cfg = parse_config(preset(name))
        assert cfg.command == "nernst-check"
        assert len(cfg.temperatures) >= 6
    with pytest.raises(KeyError):
        preset("nope")


def test_preset_override_by_config(tmp_path, capsys):
    override = write(tmp_path, '[temperature]\nvalue = [10.0, 20.0]\n')
    code = main(["--preset", "plasma", "--config", override, "--command", "breakdown"])
    assert code == EXIT_OK
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0].startswith("a_um,T_K,E0_eV,F_total_eV")
    assert len(rows) == 3


def test_graphene_representations(tmp_path):
    base = {"command": "energy", "geometry": {"a": 1.0}, "temperature": {"value": 100.0}}
    raw = dict(base, material={"kind": "graphene", "gap": 0.1, "mu": 0.0, "representation": "pt"})
    assert run(parse_config(raw)).rows[0][2] < 0
    # the static transverse coefficient has no correlation-function form
    text = ('command = "energy"\n[geometry]\na = 1.0\n[temperature]\nvalue = 100.0\n'
            '[material]\nkind = "graphene"\ngap = 0.1\nrepresentation = "correlation"\n')
    assert main(["--config", write(tmp_path, text)]) == EXIT_CONFIG


def test_merge_switches_section_form():
    from casimir_lab.config import merge
    base = {"material": {"kind": "graphene", "gap": 0.2}, "temperature": {"min": 1, "max": 2, "points": 3}}
    out = merge(base, {"material": {"mu": 0.1}, "temperature": {"value": 5.0}})
    assert out["material"] == {"kind": "graphene", "gap": 0.2, "mu": 0.1}
    assert out["temperature"] == {"value": 5.0}
    out = merge(base, {"material": {"kind": "ideal"}, "temperature": {"points": 8}})
    assert out["material"] == {"kind": "ideal"}
    assert out["temperature"]["points"] == 8 and out["temperature"]["min"] == 1


def test_render_formats():
    t = Table(["x", "flag"], [[1.0 / 3, True]])
    assert render(t, "csv") == "x,flag\n0.333333333333,true\n"
    assert json.loads(render(t, "json"))["rows"] == [[0.333333333333, True]]


def test_pfa_command(tmp_path, capsys):
    text = ENERGY_TOML.replace('"energy"', '"pfa"').replace("a = [0.5, 1.0]", "a = 1.0\nR = 100.0")
    assert main(["--config", write(tmp_path, text)]) == EXIT_OK
    rows = capsys.readouterr().out.strip().splitlines()
    assert float(rows[1].split(",")[3]) == pytest.approx(-math.pi**3 * HBAR_C * 100 / 360, rel=1e-6)
