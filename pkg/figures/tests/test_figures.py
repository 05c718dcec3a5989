"""Every figure renders from its golden CSVs; mismatched parameters abort."""

import pathlib

import pytest
from PIL import Image

from figkit import FigureInputError, read_scan, render
from figkit.cli import main

GOLDEN = pathlib.Path(__file__).parent / "golden"

FIGURE_INPUTS = {
    "phase-diagram": ["phase_diagram.csv"],
    "ricci-region-i": ["ricci_region1_N51.csv", "ricci_region1_N101.csv"],
    "ricci-region-iii": ["ricci_region3_N101.csv"],
    "geodesic": ["geodesic_N51.csv", "phase_diagram.csv"],
    "fsc-derivative": ["fsc_N51.csv"],
    "nc-derivative": ["nc_static.csv"],
    "quench-echo": ["quench_h05.csv", "quench_h10.csv", "quench_h14.csv"],
    "multi-quench": ["multi_quench_b.csv"],
    "multi-quench-long": ["multi_quench_long_N501.csv"],
    "ee-three-spin": ["ee_three_spin.csv"],
    "ee-four-spin": ["ee_four_spin_h025.csv", "ee_four_spin_h250.csv"],
}


@pytest.mark.parametrize("figure", sorted(FIGURE_INPUTS))
def test_renders_with_header_metadata(figure, tmp_path):
    csvs = [GOLDEN / name for name in FIGURE_INPUTS[figure]]
    out = tmp_path / f"{figure}.png"
    rc = main([figure, *map(str, csvs), "--out", str(out)])
    assert rc == 0
    assert out.exists() and out.stat().st_size > 0
    meta = Image.open(out).text
    first = read_scan(csvs[0])
    for key, val in first.header.items():
        assert meta.get(f"fourspin:0:{key}") == val


def test_parameter_mismatch_aborts(tmp_path):
    # a quench CSV with the wrong J3 must be rejected by the echo figure
    src = (GOLDEN / "quench_h05.csv").read_text().replace(
        "# J3 = 0.20000000000000001", "# J3 = 0.5")
    bad = tmp_path / "bad.csv"
    bad.write_text(src)
    out = tmp_path / "img.png"
    rc = main(["quench-echo", str(bad), str(GOLDEN / "quench_h10.csv"),
               str(GOLDEN / "quench_h14.csv"), "--out", str(out)])
    assert rc == 1
    assert not out.exists()


def test_missing_header_key_aborts(tmp_path):
    lines = [l for l in (GOLDEN / "ee_three_spin.csv").read_text().splitlines()
             if not l.startswith("# J1")]
    bad = tmp_path / "noJ1.csv"
    bad.write_text("\n".join(lines) + "\n")
    out = tmp_path / "img.png"
    rc = main(["ee-three-spin", str(bad), "--out", str(out)])
    assert rc == 1
    assert not out.exists()


def test_empty_csv_aborts(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "img.png"
    rc = main(["ee-three-spin", str(empty), "--out", str(out)])
    assert rc == 1
    assert not out.exists()


def test_missing_file_aborts(tmp_path):
    out = tmp_path / "img.png"
    rc = main(["phase-diagram", str(tmp_path / "nope.csv"), "--out", str(out)])
    assert rc == 1
    assert not out.exists()


def test_wrong_input_count_aborts(tmp_path):
    out = tmp_path / "img.png"
    rc = main(["geodesic", str(GOLDEN / "geodesic_N51.csv"), "--out", str(out)])
    assert rc == 1


def test_deterministic_output(tmp_path):
    out1 = tmp_path / "a.png"
    out2 = tmp_path / "b.png"
    for out in (out1, out2):
        assert main(["ee-three-spin", str(GOLDEN / "ee_three_spin.csv"),
                     "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_svg_output(tmp_path):
    out = tmp_path / "fig.svg"
    rc = main(["phase-diagram", str(GOLDEN / "phase_diagram.csv"),
               "--out", str(out)])
    assert rc == 0
    assert "figkit" in out.read_text()[:4000]


def test_render_api_rejects_unknown_figure(tmp_path):
    with pytest.raises(FigureInputError):
        render("no-such-figure", [GOLDEN / "phase_diagram.csv"], tmp_path / "x.png")
