import numpy as np
import pytest

from honest_credible import figures as fg
from honest_credible import sequence_model as sm

SMALL = dict(n_list=(1e4,), draws=200, burn_in=100, t_points=64)


class TestFigures:
    def test_truth_curve_plumbing(self):
        panels = fg.figure_panels(fg.FigureConfig(**SMALL, methods=("eb_mle",)))
        p = panels[("eb_mle", 1e4)]
        assert np.array_equal(p.truth, sm.truth_function_values(sm.make_sim_truth(), p.t))
        assert np.all(p.env_lo <= p.env_hi)

    def test_methods_share_data(self):
        cfg = fg.FigureConfig(**SMALL, methods=("eb_mle", "eb_risk"))
        a = fg.figure_panels(cfg)
        b = fg.figure_panels(fg.FigureConfig(**SMALL, methods=("eb_mle",)))
        assert np.array_equal(a[("eb_mle", 1e4)].center, b[("eb_mle", 1e4)].center)

    def test_reproduce_writes_files(self, tmp_path):
        cfg = fg.FigureConfig(**SMALL, output_dir=str(tmp_path))
        fg.reproduce_figures(cfg)
        names = sorted(p.name for p in tmp_path.iterdir())
        for m in cfg.methods:
            assert f"{m}_n10000.csv" in names and f"figure_{m}.svg" in names
        head = (tmp_path / "eb_risk_n10000.csv").read_text().splitlines()[0]
        assert head == fg.PANEL_HEADER
        assert (tmp_path / "figure_hierarchical.svg").read_text().startswith("<svg")

    def test_deterministic(self):
        cfg = fg.FigureConfig(**SMALL, methods=("eb_risk",))
        a = fg.figure_panels(cfg)[("eb_risk", 1e4)]
        b = fg.figure_panels(cfg)[("eb_risk", 1e4)]
        assert np.array_equal(a.env_lo, b.env_lo) and np.array_equal(a.env_hi, b.env_hi)
