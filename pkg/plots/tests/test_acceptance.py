"""Acceptance: every figure kind renders from preset CSVs, slope annotations
match the bench CSV to three decimals, and re-rendering is byte-identical."""

import csv

import pytest

from fptplots import FigureSpec, render

from test_render import KIND_TO_CSV


@pytest.mark.parametrize("kind", sorted(KIND_TO_CSV))
def test_figure_kind_renders_and_rerenders_identically(kind, preset_csvs,
                                                       tmp_path):
    csv_path = str(preset_csvs[KIND_TO_CSV[kind]])
    first = tmp_path / f"{kind}_1.svg"
    second = tmp_path / f"{kind}_2.svg"
    render(FigureSpec(kind=kind, input_csv=csv_path, output_path=str(first)))
    render(FigureSpec(kind=kind, input_csv=csv_path, output_path=str(second)))
    a, b = first.read_bytes(), second.read_bytes()
    assert len(a) > 0
    assert a == b
    print(f"ACCEPTANCE figure-{kind}: PASS (byte-identical re-render)")


def test_bias_loglog_slope_annotations_match_csv(preset_csvs, tmp_path):
    bench = preset_csvs["bench"]
    with open(bench, "r", encoding="utf-8") as fh:
        rows = list(csv.DictReader(ln for ln in fh if not ln.startswith("#")))
    slopes = {}
    for row in rows:
        slopes[row["variant"]] = float(row["slope"])
    out = tmp_path / "bias.svg"
    render(FigureSpec(kind="bias_loglog", input_csv=str(bench),
                      output_path=str(out)))
    text = out.read_text()
    for variant, slope in slopes.items():
        assert f"{variant}: slope={slope:.3f}" in text
    print("ACCEPTANCE figure-slope-annotations: PASS "
          f"({ {k: round(v, 3) for k, v in slopes.items()} })")
