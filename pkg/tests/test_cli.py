import json
from pathlib import Path

import pytest

from adicomp import __version__
from adicomp.cli import gallery_names, gallery_text, main
from adicomp.dsl import parse_scenario
from adicomp.report import (
    SCHEMA_VERSION,
    emit,
    empty_report,
    load_report,
    report_verdicts,
    run_scenario,
    strip_timing,
    to_json,
)

FIXTURES = Path(__file__).parent / "fixtures"


def run_json(capsys, *argv):
    code = main(["--format", "json", *argv])
    return code, capsys.readouterr().out


def test_gallery_listing(capsys):
    assert main(["--list-gallery"]) == 0
    names = capsys.readouterr().out.split()
    assert "Z-at-2" in names and "basechange-gap" in names


def test_gallery_lookup_ignores_case():
    assert gallery_text("z-AT-2") == gallery_text("Z-at-2")


def test_z_at_2_parses_to_four_declarations_and_five_tasks():
    scn = parse_scenario(gallery_text("Z-at-2"))
    assert len(scn.decls) == 4
    assert len(scn.tasks) == 5


def test_golden_z_at_2(capsys):
    code, out = run_json(capsys, "--gallery", "Z-at-2")
    assert code == 0
    assert out == (FIXTURES / "Z-at-2.json").read_text(encoding="utf-8")


def test_empty_report_is_valid_json():
    data = json.loads(to_json(empty_report()))
    assert data["tasks"] == []
    assert data["schema_version"] == SCHEMA_VERSION


def test_emit_then_load_preserves_verdicts(tmp_path):
    scn = parse_scenario(gallery_text("basechange-gap"))
    rep = run_scenario(scn, "basechange-gap")
    path = tmp_path / "r.json"
    emit(rep, "json", str(path))
    back = load_report(path.read_text(encoding="utf-8"))
    before = {k: v.to_dict() for k, v in report_verdicts(rep).items()}
    after = {k: v.to_dict() for k, v in report_verdicts(back).items()}
    assert before == after
    assert back["tasks"][0]["discrepancy"] is True


def test_load_rejects_other_schema():
    with pytest.raises(ValueError):
        load_report(json.dumps({"schema_version": SCHEMA_VERSION + 1}))


def test_text_output_shows_glyphs_and_discrepancy(capsys):
    assert main(["--gallery", "basechange-gap"]) == 0
    out = capsys.readouterr().out
    assert "✘" in out and "✔" in out
    assert "DISCREPANCY" in out


def test_json_output_flags_discrepancy(capsys):
    _, out = run_json(capsys, "--gallery", "basechange-gap")
    data = json.loads(out)
    assert data["tasks"][0]["discrepancy"] is True
    assert data["summary"]["discrepancies"] == 1


def test_strict_exit_code_on_failures(capsys):
    assert main(["--gallery", "Z-at-2", "--strict"]) == 2
    assert main(["--gallery", "koszul-selfdual", "--strict"]) == 0
    capsys.readouterr()


def test_depth_override_is_recorded(capsys):
    _, out = run_json(capsys, "--gallery", "regular-sequence", "--depth", "3")
    data = json.loads(out)
    assert data["depth_override"] == 3
    assert all(t["depth"] == 3 for t in data["tasks"])


def test_timing_only_on_request(capsys):
    _, plain = run_json(capsys, "--gallery", "regular-sequence")
    _, timed = run_json(capsys, "--gallery", "regular-sequence", "--timing")
    assert "wall_clock_s" not in plain
    assert "wall_clock_s" in timed
    assert strip_timing(json.loads(timed)) == json.loads(plain)


def test_parse_error_reports_position(tmp_path, capsys):
    p = tmp_path / "bad.scn"
    p.write_text("ring R = ZZ\ntask frobnicate R\n", encoding="utf-8")
    assert main(["--scenario", str(p)]) == 1
    err = capsys.readouterr().err
    assert f"{p}:2:6:" in err and "frobnicate" in err


def test_task_error_is_recorded_without_aborting(tmp_path, capsys):
    p = tmp_path / "mixed.scn"
    p.write_text("ring R = poly(QQ, [x, y])\nideal I = (x)\nideal J = (y)\nmap t = ringmap(R -> R, x -> x, y -> y)\n"
                 "task base_change t I J depth=3\ntask koszul_homology I\n", encoding="utf-8")
    code, out = run_json(capsys, "--scenario", str(p))
    data = json.loads(out)
    assert code == 1
    assert [t["status"] for t in data["tasks"]] == ["error", "ok"]
    assert "RadicalPreconditionError" in data["tasks"][0]["error"]
    code = main(["--format", "json", "--strict", "--scenario", str(p)])
    data = json.loads(capsys.readouterr().out)
    assert code == 1 and len(data["tasks"]) == 1


def test_out_writes_file(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["--gallery", "wpr", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text(encoding="utf-8").startswith(f"adicomp {__version__}")


def test_missing_scenario_file(capsys):
    assert main(["--scenario", "/nonexistent/x.scn"]) == 1
    assert "error" in capsys.readouterr().err


def test_unknown_gallery(capsys):
    assert main(["--gallery", "nope"]) == 1
    assert "Z-at-2" in capsys.readouterr().err


def test_every_gallery_scenario_parses():
    for name in gallery_names():
        parse_scenario(gallery_text(name))


@pytest.mark.parametrize("name", ["Z-at-2", "basechange-pos", "spectral-edge", "wpr"])
def test_gallery_json_is_deterministic(name, capsys):
    _, first = run_json(capsys, "--gallery", name)
    _, second = run_json(capsys, "--gallery", name)
    assert first == second
