"""Run reports: assembly, JSON and text rendering, loading."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import __version__
from .dsl import Scenario, elaborate
from .modules import FpModule
from .rings import Ideal, RingElement
from .structure import describe
from .tasks import run_task
from .towers import GLYPHS, Verdict

SCHEMA_VERSION = 1
TIMING_KEY = "timing"


def jsonable(obj: Any) -> Any:
    """Plain JSON data with string keys; math objects become their printed forms."""
    if isinstance(obj, Verdict):
        return jsonable(obj.to_dict())
    if hasattr(obj, "to_dict") and callable(obj.to_dict):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, FpModule):
        return describe(obj)
    if isinstance(obj, (RingElement, Ideal)):
        return str(obj)
    return str(obj)


def scenario_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def run_scenario(scn: Scenario, name: str = "", depth: Optional[int] = None, strict: bool = False,
                 timing: bool = False) -> Dict[str, Any]:
    """Execute every task; a task error is recorded and, under strict, stops the run."""
    env = elaborate(scn)
    tasks: List[Dict[str, Any]] = []
    for i, task in enumerate(scn.tasks):
        entry: Dict[str, Any] = {"index": i, "task": task.name, "command": task.describe(), "line": task.line}
        start = time.perf_counter()
        try:
            d, (result, verdicts, disc) = run_task(task, env, depth)
            entry.update(status="ok", depth=d, verdicts={k: v.to_dict() for k, v in verdicts.items()},
                         discrepancy=bool(disc), result=result)
        except Exception as exc:  # recorded per task, see strict below
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}")
        if timing:
            entry[TIMING_KEY] = {"wall_clock_s": round(time.perf_counter() - start, 6)}
        tasks.append(jsonable(entry))
        if strict and entry["status"] == "error":
            break
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "adicomp", "version": __version__},
        "scenario": {"name": name, "sha256": scenario_hash(scn.text),
                     "declarations": [[d.kind, d.name] for d in scn.decls], "task_count": len(scn.tasks)},
        "depth_override": depth,
        "tasks": tasks,
        "summary": summarize(tasks),
    }


def empty_report(name: str = "") -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "tool": {"name": "adicomp", "version": __version__},
            "scenario": {"name": name, "sha256": scenario_hash(""), "declarations": [], "task_count": 0},
            "depth_override": None, "tasks": [], "summary": summarize([])}


def summarize(tasks: List[Dict[str, Any]]) -> Dict[str, int]:
    out = {"tasks": len(tasks), "ok": 0, "errors": 0, "holds": 0, "fails_up_to_depth": 0,
           "undetermined": 0, "discrepancies": 0}
    for t in tasks:
        if t["status"] != "ok":
            out["errors"] += 1
            continue
        out["ok"] += 1
        out["discrepancies"] += bool(t.get("discrepancy"))
        for v in t["verdicts"].values():
            out[v["status"]] += 1
    return out


def exit_code(report: Dict[str, Any], strict: bool) -> int:
    s = report["summary"]
    if s["errors"]:
        return 1
    if strict and s["fails_up_to_depth"]:
        return 2
    return 0


# ---------------------------------------------------------------- rendering

def to_json(report: Dict[str, Any]) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_report(text: str) -> Dict[str, Any]:
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
    return data


def report_verdicts(report: Dict[str, Any]) -> Dict[str, Verdict]:
    """Every task verdict keyed by 'index:name'."""
    out = {}
    for t in report["tasks"]:
        for k, v in t.get("verdicts", {}).items():
            out[f"{t['index']}:{k}"] = Verdict.from_dict(v)
    return out


def strip_timing(report: Dict[str, Any]) -> Dict[str, Any]:
    data = json.loads(json.dumps(report))
    for t in data.get("tasks", []):
        t.pop(TIMING_KEY, None)
    return data


_COLORS = {"holds": "\033[32m", "fails_up_to_depth": "\033[31m", "undetermined": "\033[33m"}


def to_text(report: Dict[str, Any], color: bool = False) -> str:
    sc = report["scenario"]
    lines = [f"adicomp {report['tool']['version']}  scenario {sc['name'] or '-'}  sha256 {sc['sha256'][:12]}"]
    if report.get("depth_override") is not None:
        lines.append(f"depth override: {report['depth_override']}")
    for t in report["tasks"]:
        head = f"[{t['index']}] {t['command']}"
        if t["status"] != "ok":
            lines.append(head)
            lines.append(f"    error: {t['error']}")
            continue
        lines.append(f"{head}  (depth {t['depth']})")
        rows = [(k, v["status"], v.get("note", "")) for k, v in t["verdicts"].items()]
        width = max([len(k) for k, _, _ in rows] + [4])
        swidth = max(len(s) for s in GLYPHS)
        for k, status, note in rows:
            glyph = GLYPHS[status]
            if color:
                glyph = _COLORS[status] + glyph + "\033[0m"
            lines.append(f"    {k.ljust(width)}  {glyph}  {status.ljust(swidth)}  {note}".rstrip())
        if t.get("discrepancy"):
            lines.append("    !! DISCREPANCY: certified verdicts disagree where equivalence is asserted")
        if TIMING_KEY in t:
            lines.append(f"    time {t[TIMING_KEY]['wall_clock_s']:.3f}s")
    s = report["summary"]
    lines.append(f"summary: {s['ok']}/{s['tasks']} tasks ok, {s['errors']} errors; "
                 f"{s['holds']} ✔  {s['fails_up_to_depth']} ✘  {s['undetermined']} ?; "
                 f"{s['discrepancies']} discrepancies")
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".adicomp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(report: Dict[str, Any], fmt: str = "text", path: Optional[str] = None, color: bool = False) -> str:
    if fmt == "json":
        text = to_json(report)
    elif fmt == "text":
        text = to_text(report, color=color and path is None)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path:
        write_atomic(path, text)
    return text
