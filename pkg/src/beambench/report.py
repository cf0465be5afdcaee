"""Report rendering: structured JSON, delimiter-separated tables, SVG plots.

Everything written here is a deterministic function of the report
contents; rendering the same report twice yields byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .benchmark import Case
from .metrics import AblationReport, EvaluationReport, render_robustness
from .model import BeamModel, PointLoad, SupportKind, Udl
from .statics import DiagramSet, describe_reactions, diagrams, solve_reactions
from .svg import SvgCanvas


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _csv_text(rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def render_report(
    report: EvaluationReport,
    out_dir: Path,
    formats: tuple[str, ...] = ("json", "csv", "svg"),
    diagram_cases: list[Case] | None = None,
) -> list[Path]:
    """Write the evaluation report; returns the written paths."""
    out_dir = Path(out_dir)
    written: list[Path] = []
    if "json" in formats:
        written.append(
            _write(out_dir / "report.json", json.dumps(report.to_dict(), indent=2) + "\n")
        )
    if "csv" in formats:
        rows = [["case_id", "family", "position", "correct", "total", "reliability"]]
        for stats in report.cases:
            rows.append(
                [
                    stats.case_id,
                    stats.family or "",
                    "" if stats.position is None else f"{stats.position:g}",
                    stats.correct,
                    stats.total,
                    f"{float(stats.reliability):.3f}",
                ]
            )
        written.append(_write(out_dir / "cases.csv", _csv_text(rows)))
        rows = [["family", "robustness"]]
        for family in report.families():
            rows.append([family, render_robustness(report.family_robustness(family))])
        if len(rows) > 1:
            written.append(_write(out_dir / "robustness.csv", _csv_text(rows)))
    if "svg" in formats:
        for family in report.families():
            series = report.sweep_series(family)
            if len(series) < 2:
                continue
            svg = _reliability_curve(family, series, report.family_robustness(family))
            written.append(_write(out_dir / f"curve_{family}.svg", svg))
        for case in diagram_cases or []:
            svg = render_diagram_svg(case.model)
            written.append(_write(out_dir / f"diagram_{case.case_id}.svg", svg))
    return written


def render_ablation(
    ablation: AblationReport, out_dir: Path, formats: tuple[str, ...] = ("json", "csv", "txt")
) -> list[Path]:
    out_dir = Path(out_dir)
    written: list[Path] = []
    if "json" in formats:
        written.append(
            _write(out_dir / "ablation.json", json.dumps(ablation.to_dict(), indent=2) + "\n")
        )
    if "csv" in formats:
        header = ["config"] + [f"reliability_{t}" for t in ablation.task_ids] + ["robustness"]
        rows = [header]
        for name in ablation.config_names:
            row = [name]
            for rel in ablation.reliabilities(name):
                row.append(f"{float(rel):.3f}")
            row.append(render_robustness(ablation.config_robustness(name)))
            rows.append(row)
        written.append(_write(out_dir / "ablation.csv", _csv_text(rows)))
    if "txt" in formats:
        written.append(_write(out_dir / "ablation.txt", _ablation_text(ablation)))
    return written


def _ablation_text(ablation: AblationReport) -> str:
    name_width = max(len(n) for n in ablation.config_names) + 2
    headers = [f"Reliability: {t}" for t in ablation.task_ids] + ["Robustness"]
    col_width = max(len(h) for h in headers) + 2
    lines = [
        "Prompt configuration".ljust(name_width) + "".join(h.rjust(col_width) for h in headers)
    ]
    for name in ablation.config_names:
        cells = [f"{float(r):.3f}" for r in ablation.reliabilities(name)]
        cells.append(render_robustness(ablation.config_robustness(name)))
        lines.append(name.ljust(name_width) + "".join(c.rjust(col_width) for c in cells))
    return "\n".join(lines) + "\n"


# --- plotting -----------------------------------------------------------------

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 50.0, 15.0, 30.0, 35.0


def _reliability_curve(family: str, series, robustness_value: float | None) -> str:
    width, height = 420.0, 260.0
    canvas = SvgCanvas(width, height)
    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B
    xs = [pos for pos, _ in series]
    x_min, x_max = min(xs), max(xs)
    span = x_max - x_min or 1.0

    def px(pos: float) -> float:
        return _MARGIN_L + (pos - x_min) / span * plot_w

    def py(rel: float) -> float:
        return _MARGIN_T + (1.0 - rel) * plot_h

    # frame and gridlines at 0, 0.5, 1.0
    for level in (0.0, 0.5, 1.0):
        canvas.line(_MARGIN_L, py(level), width - _MARGIN_R, py(level), stroke="#cccccc", width=0.5)
        canvas.text(_MARGIN_L - 6, py(level) + 4, f"{level:.1f}", size=10, anchor="end")
    canvas.line(_MARGIN_L, py(0.0), _MARGIN_L, py(1.0), stroke="#333333")
    canvas.line(_MARGIN_L, py(0.0), width - _MARGIN_R, py(0.0), stroke="#333333")
    for pos in sorted(set(int(x) for x in xs)):
        canvas.text(px(pos), height - _MARGIN_B + 14, f"{pos:g}", size=9, anchor="middle")
    points = [(px(pos), py(float(rel))) for pos, rel in series]
    canvas.polyline(points)
    for x, y in points:
        canvas.circle(x, y, 2.5)
    title = f"{family}  reliability vs load position"
    if robustness_value is not None:
        title += f"  (robustness {robustness_value:.3f})"
    canvas.text(_MARGIN_L, 18, title, size=12)
    canvas.text(width / 2, height - 8, "load position [m]", size=10, anchor="middle")
    return canvas.to_string()


def render_diagram_svg(model: BeamModel, diagram_set: DiagramSet | None = None) -> str:
    """Beam sketch plus axial/shear/moment diagram panels for one model."""
    if diagram_set is None:
        diagram_set = diagrams(model)
    width = 460.0
    panel_h = 120.0
    sketch_h = 80.0
    height = sketch_h + 3 * panel_h + 20.0
    canvas = SvgCanvas(width, height)
    plot_w = width - _MARGIN_L - _MARGIN_R

    def px(x: float) -> float:
        return _MARGIN_L + x / model.span_m * plot_w

    _draw_sketch(canvas, model, px, y0=45.0)

    rows = diagram_set.sample(24)
    labels = ("axial [kN]", "shear [kN]", "moment [kN*m]")
    for panel, label in enumerate(labels):
        values = [row[1 + panel] for row in rows]
        top = sketch_h + panel * panel_h + 10.0
        _draw_panel(canvas, label, rows, values, px, top, panel_h - 20.0)
    return canvas.to_string()


def _draw_panel(canvas: SvgCanvas, label: str, rows, values, px, top: float, h: float) -> None:
    v_max = max(max(values), 0.0)
    v_min = min(min(values), 0.0)
    spread = (v_max - v_min) or 1.0

    def py(v: float) -> float:
        return top + (v_max - v) / spread * h

    zero_y = py(0.0)
    canvas.line(px(rows[0][0]), zero_y, px(rows[-1][0]), zero_y, stroke="#888888", width=0.75)
    points = [(px(row[0]), py(v)) for row, v in zip(rows, values)]
    filled = [(px(rows[0][0]), zero_y)] + points + [(px(rows[-1][0]), zero_y)]
    canvas.polygon(filled)
    canvas.polyline(points)
    canvas.text(_MARGIN_L, top - 2, label, size=10)
    canvas.text(px(rows[0][0]) - 6, zero_y + 3, "0", size=9, anchor="end")
    canvas.text(_MARGIN_L + 120, top - 2, f"min {v_min:.2f}  max {v_max:.2f}", size=9, fill="#666666")


def _draw_sketch(canvas: SvgCanvas, model: BeamModel, px, y0: float) -> None:
    canvas.text(_MARGIN_L, 16, f"{model.id}  (span {model.span_m:g} m)", size=12)
    canvas.text(_MARGIN_L, 28, describe_reactions(model, solve_reactions(model)), size=8.5, fill="#555555")
    canvas.line(px(0.0), y0, px(model.span_m), y0, stroke="#222222", width=2.5)
    for support in model.supports:
        x = px(support.position_m)
        if support.kind is SupportKind.FIXED:
            canvas.line(x, y0 - 16, x, y0 + 16, stroke="#222222", width=3.0)
            for k in range(5):
                canvas.line(x, y0 - 16 + 8 * k, x - 7, y0 - 10 + 8 * k, stroke="#222222", width=1.0)
        else:
            canvas.polyline([(x, y0), (x - 7, y0 + 13), (x + 7, y0 + 13), (x, y0)], stroke="#222222", width=1.5)
            if support.kind is SupportKind.ROLLER:
                canvas.circle(x - 4, y0 + 17, 2.5, fill="#222222")
                canvas.circle(x + 4, y0 + 17, 2.5, fill="#222222")
    for load in model.loads:
        if isinstance(load, PointLoad):
            x = px(load.position_m)
            sign = -1.0 if load.direction.value == "down" else 1.0
            tip, tail = y0 - 4.0 * sign, y0 - 26.0 * sign
            canvas.line(x, tail, x, tip, stroke="#c0392b", width=1.5)
            canvas.polyline(
                [(x - 3, tip + 5 * (-sign)), (x, tip), (x + 3, tip + 5 * (-sign))],
                stroke="#c0392b",
                width=1.5,
            )
            canvas.text(x, tail - 4 if sign > 0 else tail + 10, f"{load.magnitude_kN:g} kN", size=9, anchor="middle", fill="#c0392b")
        elif isinstance(load, Udl):
            x1, x2 = px(load.start_m), px(load.end_m)
            sign = -1.0 if load.direction.value == "down" else 1.0
            bar_y = y0 - 22.0 * sign
            canvas.line(x1, bar_y, x2, bar_y, stroke="#2c6e49", width=1.5)
            n_arrows = max(3, int((x2 - x1) / 18))
            for k in range(n_arrows + 1):
                x = x1 + (x2 - x1) * k / n_arrows
                tip = y0 - 4.0 * sign
                canvas.line(x, bar_y, x, tip, stroke="#2c6e49", width=0.75)
                canvas.polyline(
                    [(x - 2, tip + 4 * (-sign)), (x, tip), (x + 2, tip + 4 * (-sign))],
                    stroke="#2c6e49",
                    width=0.75,
                )
            canvas.text((x1 + x2) / 2, bar_y - 4 if sign > 0 else bar_y + 10, f"{load.intensity_kN_per_m:g} kN/m", size=9, anchor="middle", fill="#2c6e49")
