import re
import xml.dom.minidom

import numpy as np
import pytest

from simforge.compiler import lower
from simforge.document import parse_document, resolve_language
from simforge.render import (
    CurveDrawable,
    FieldDrawable,
    PlotError,
    PointDrawable,
    build_plot_model,
    nice_ticks,
    render_svg,
)
from simforge.runtime import make_valuation, run

from conftest import CORPUS


@pytest.fixture(scope="module")
def pendulum_model(pendulum_view, pendulum_irs):
    compute_ir, _ = pendulum_irs
    valuation, _ = make_valuation(compute_ir)
    result = run(compute_ir, valuation)
    return build_plot_model(pendulum_view.doc.display, result), result


class TestPlotModel:
    def test_pendulum_window_and_axis(self, pendulum_model):
        model, _ = pendulum_model
        assert len(model.windows) == 1
        window = model.windows[0]
        assert window.title == "Comparison of the two solutions"
        assert len(window.axes) == 1

    def test_two_curves_and_a_cross(self, pendulum_model):
        model, _ = pendulum_model
        drawables = model.windows[0].axes[0].drawables
        curves = [d for d in drawables if isinstance(d, CurveDrawable)]
        points = [d for d in drawables if isinstance(d, PointDrawable)]
        assert [c.legend for c in curves] == ["Real solution", "Harmonic solution"]
        assert len(points) == 1
        assert (points[0].x, points[0].y) == (0.0, 2.0)

    def test_labels_from_domain_and_unit(self, pendulum_model):
        model, _ = pendulum_model
        axis = model.windows[0].axes[0]
        assert axis.x_label == "t"
        assert axis.y_label == "rad"

    def test_auto_bounds_pad_five_percent(self, pendulum_model):
        model, result = pendulum_model
        axis = model.windows[0].axes[0]
        xs, _ = result.series["theta"]
        lo, hi = float(xs.min()), float(xs.max())
        pad = 0.05 * (hi - lo)
        assert axis.bounds[0] == pytest.approx(lo - pad)
        assert axis.bounds[1] == pytest.approx(hi + pad)

    def test_bounds_contain_all_drawable_data(self, pendulum_model):
        model, result = pendulum_model
        x_lo, x_hi, y_lo, y_hi = model.windows[0].axes[0].bounds
        for symbol in ("theta", "theta_lin"):  # the drawn series
            xs, ys = result.series[symbol]
            assert x_lo <= xs.min() and xs.max() <= x_hi
            assert y_lo <= ys.min() and ys.max() <= y_hi
        px, py = result.points["point0"]
        assert x_lo <= px <= x_hi and y_lo <= py <= y_hi

    def test_surface_under_2d_axis_is_pseudocolor_field(self):
        doc = parse_document(
            (CORPUS / "surface.xml").read_text(encoding="utf-8"), doc_id="surface"
        )
        view = resolve_language(doc, None)
        compute_ir, _ = lower(view)
        valuation, _ = make_valuation(compute_ir)
        result = run(compute_ir, valuation)
        model = build_plot_model(view.doc.display, result)
        axis3d, axis2d = model.windows[0].axes
        assert axis3d.dims == 3 and axis2d.dims == 2
        assert isinstance(axis2d.drawables[0], FieldDrawable)

    def test_unresolved_ref_is_hard_error(self, pendulum_view, pendulum_irs):
        compute_ir, _ = pendulum_irs
        valuation, _ = make_valuation(compute_ir)
        result = run(compute_ir, valuation)
        result.series.pop("theta")
        with pytest.raises(PlotError, match="theta"):
            build_plot_model(pendulum_view.doc.display, result)

    def test_french_legend_text(self, pendulum_doc):
        view = resolve_language(pendulum_doc, "french")
        compute_ir, _ = lower(view)
        valuation, _ = make_valuation(compute_ir)
        result = run(compute_ir, valuation)
        model = build_plot_model(view.doc.display, result)
        curves = [
            d
            for d in model.windows[0].axes[0].drawables
            if isinstance(d, CurveDrawable)
        ]
        assert curves[0].legend == "Solution réelle"


class TestSvg:
    def test_pendulum_svg_contract(self, pendulum_model):
        model, _ = pendulum_model
        svg = render_svg(model)
        xml.dom.minidom.parseString(svg)  # well-formed
        assert svg.count('class="curve"') == 2
        assert svg.count('class="point-marker"') == 1
        assert ">Real solution</text>" in svg
        assert ">Harmonic solution</text>" in svg

    def test_deterministic(self, pendulum_model):
        model, _ = pendulum_model
        assert render_svg(model) == render_svg(model)

    def test_empty_axis_has_frame_and_ticks_only(self):
        doc = parse_document(
            """
            <simulation>
              <header><author>a</author><date>d</date></header>
              <display><window><axis2d/></window></display>
            </simulation>
            """
        )
        view = resolve_language(doc, None)
        compute_ir, _ = lower(view)
        result = run(compute_ir, *make_valuation(compute_ir)[:1])
        model = build_plot_model(view.doc.display, result)
        svg = render_svg(model)
        xml.dom.minidom.parseString(svg)
        assert 'class="frame"' in svg
        assert 'class="tick-label"' in svg
        assert 'class="curve"' not in svg

    def test_single_svg_root(self, pendulum_model):
        model, _ = pendulum_model
        svg = render_svg(model)
        document = xml.dom.minidom.parseString(svg)
        assert document.documentElement.tagName == "svg"

    def test_plot_area_carries_data_mapping(self, pendulum_model):
        model, _ = pendulum_model
        svg = render_svg(model)
        area = re.search(r'<g class="plot-area"[^>]*>', svg).group(0)
        for attr in (
            "data-x-min",
            "data-x-max",
            "data-y-min",
            "data-y-max",
            "data-px-left",
            "data-px-top",
            "data-px-width",
            "data-px-height",
        ):
            assert attr in area

    def test_requested_size(self, pendulum_model):
        model, _ = pendulum_model
        svg = render_svg(model, size=(300, 200))
        assert 'width="300" height="200"' in svg

    def test_field_rendering(self):
        doc = parse_document(
            (CORPUS / "poisson.xml").read_text(encoding="utf-8"), doc_id="poisson"
        )
        view = resolve_language(doc, None)
        compute_ir, _ = lower(view)
        valuation, _ = make_valuation(compute_ir)
        result = run(compute_ir, valuation)
        model = build_plot_model(view.doc.display, result)
        svg = render_svg(model)
        xml.dom.minidom.parseString(svg)
        assert 'class="field"' in svg  # pseudo-color cells
        assert 'class="mesh"' in svg  # 3-D wireframe


class TestTicks:
    @pytest.mark.parametrize(
        "lo,hi",
        [(0.0, 1.0), (-2.2, 2.2), (0.0, 0.001), (5.0, 50000.0), (-0.1, 2.1)],
    )
    def test_at_most_eleven_round_ticks(self, lo, hi):
        ticks = nice_ticks(lo, hi)
        assert 2 <= len(ticks) <= 11
        assert all(lo - 1e-9 <= t <= hi + 1e-9 for t in ticks)
        steps = np.diff(ticks)
        assert np.allclose(steps, steps[0])
        # steps are 1, 2 or 5 times a power of ten
        mantissa = steps[0] / 10 ** np.floor(np.log10(steps[0]))
        assert min(abs(mantissa - m) for m in (1.0, 2.0, 5.0, 10.0)) <= 1e-9

    def test_degenerate_range(self):
        assert nice_ticks(1.0, 1.0) == []
