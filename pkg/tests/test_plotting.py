import io
import json

from divitopos.cli import run_command
from divitopos.lattice import AmbientLattice, omega_count
from divitopos.plotting import hasse_positions, plot_check_summary, plot_hasse

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_hasse_positions_rank_by_prime_count():
    lat = AmbientLattice(12)
    pos = hasse_positions(lat)
    assert set(pos) == set(lat.elements)
    assert all(pos[n][1] == omega_count(n) for n in lat)
    assert pos[1] == (0.0, 0.0) and pos[12] == (0.0, 3.0)
    # ranks are centred
    for r in {y for _, y in pos.values()}:
        assert sum(x for x, y in pos.values() if y == r) == 0


def test_cover_edges_climb_one_rank():
    lat = AmbientLattice(360)
    pos = hasse_positions(lat)
    assert all(pos[n][1] - pos[k][1] == 1 for k, n in lat.covering_edges())


def test_plot_hasse_writes_png(tmp_path):
    path = plot_hasse(AmbientLattice(60), tmp_path / "h.png", highlight={1, 2, 3, 6})
    assert path.read_bytes()[:8] == PNG_MAGIC


def test_plot_check_summary_with_failure(tmp_path):
    results = [
        {"id": "1", "title": "ok", "pass": True, "cases": 100},
        {"id": "2", "title": "bad", "pass": False, "cases": 0},
    ]
    path = plot_check_summary(results, tmp_path / "s.png")
    assert path.read_bytes()[:8] == PNG_MAGIC


def test_verify_all_figures(tmp_path):
    out = io.StringIO()
    code = run_command(["verify-all", "--modulus", "12", "--figures", str(tmp_path)], out)
    assert code == 0
    assert json.loads(out.getvalue())["pass"] is True
    for name in ("hasse_12.png", "verification_summary.png"):
        assert (tmp_path / name).read_bytes()[:8] == PNG_MAGIC
