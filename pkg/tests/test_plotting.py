"""Figure and CSV writers."""

from __future__ import annotations

from planecode.plotting import plot_pappus, plot_weight_distribution, write_weight_csv


def test_weight_files(tmp_path):
    table = {0: 1, 3: 7, 4: 7, 7: 1}
    csv_path = write_weight_csv(table, tmp_path / "w.csv")
    assert csv_path.read_text().splitlines() == ["weight,count", "0,1", "3,7", "4,7", "7,1"]
    png = plot_weight_distribution(table, tmp_path / "w.png", title="Fano")
    assert png.stat().st_size > 1000


def test_pappus_figure(tmp_path):
    records = [{"order": 3, "copies": 52, "bound": 52}, {"order": 9, "label": "Hall(9)", "copies": 4514400, "bound": 19262880}]
    png = plot_pappus(records, tmp_path / "p.png")
    assert png.read_bytes()[:4] == b"\x89PNG"
