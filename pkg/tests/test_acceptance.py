"""Acceptance gate: one test per criterion, each at its stated tolerance."""

import math
import shutil
import time
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from simforge.compiler import emit_script, emit_ui, lower, select_widget
from simforge.document import parse_document, resolve_language, validate
from simforge.document.model import LocalizedText, ScalarParam, SourcePos
from simforge.render import load_session, save_session
from simforge.runtime import (
    OdeConfig,
    SolverConfig,
    integrate_rk45,
    make_valuation,
    run,
    solve_pde_rect_grid,
)
from simforge.service import ServiceConfig, SimulationRegistry, create_app, publish_static

from conftest import CORPUS


def test_pendulum_small_angle_agreement(pendulum_irs):
    # L=1, g0=9.81, theta_0=0.1 on [0,2]s, 200-point grid; oracle is the
    # same plan integrated at rel_tol 1e-12 plus small-angle theory
    compute_ir, _ = pendulum_irs
    valuation, _ = make_valuation(compute_ir, {"theta_0": 0.1, "tf": 2.0})

    started = time.perf_counter()
    result = run(compute_ir, valuation)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"runtime {elapsed:.2f}s exceeds 1s"

    ts, theta = result.series["theta"]
    assert len(ts) == 200

    reference = run(
        compute_ir,
        valuation,
        SolverConfig(ode=OdeConfig(rel_tol=1e-12, abs_tol=1e-14)),
    )
    _, theta_ref = reference.series["theta"]
    assert np.max(np.abs(theta - theta_ref)) <= 1e-6

    harmonic = 0.1 * np.cos(np.sqrt(9.81 / 1.0) * ts)
    assert np.max(np.abs(theta - harmonic)) <= 2e-3


def test_energy_conservation(pendulum_irs):
    compute_ir, _ = pendulum_irs
    valuation, _ = make_valuation(compute_ir, {"theta_0": 2.0, "tf": 10.0})
    started = time.perf_counter()
    result = run(compute_ir, valuation)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"runtime {elapsed:.2f}s exceeds 1s"

    _, theta = result.series["theta"]
    _, theta_dot = result.series["theta_dot"]
    energy = 0.5 * theta_dot**2 - (9.81 / 1.0) * np.cos(theta)
    assert np.max(np.abs(energy - energy[0])) <= 1e-4


def test_ode_analytic_exponential():
    grid = np.linspace(0.0, 1.0, 51)
    trajectory, stats = integrate_rk45(lambda t, y: -y, np.array([1.0]), grid)
    assert stats.status == "ok"
    assert abs(trajectory[-1, 0] - math.exp(-1.0)) <= 1e-6


def test_pde_manufactured_convergence():
    def solve(n: int) -> float:
        xs = np.linspace(0.0, 1.0, n)
        ys = np.linspace(0.0, 1.0, n)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        ones = np.ones_like(gx)
        zeros = np.zeros_like(gx)
        f = 2 * math.pi**2 * np.sin(math.pi * gx) * np.sin(math.pi * gy)
        boundary = {
            "left": ("dirichlet", np.zeros(n)),
            "right": ("dirichlet", np.zeros(n)),
            "bottom": ("dirichlet", np.zeros(n)),
            "top": ("dirichlet", np.zeros(n)),
        }
        u, _ = solve_pde_rect_grid(xs, ys, ones, zeros, ones, zeros, f, boundary)
        exact = np.sin(math.pi * gx) * np.sin(math.pi * gy)
        return float(np.max(np.abs(u - exact)))

    started = time.perf_counter()
    err_33 = solve(33)
    err_65 = solve(65)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"runtime {elapsed:.2f}s exceeds 5s"
    assert err_65 <= 2e-3
    assert 3.5 <= err_33 / err_65 <= 4.5


def test_compiler_golden_lines_and_slider(pendulum_view, pendulum_irs):
    compute_ir, ui_ir = pendulum_irs
    script = emit_script(compute_ir, pendulum_view.doc.display)
    lines = script.splitlines()
    assert "function [lhs]=f_pendulum(_t,_X)" in lines
    assert any("t=linspace(0,tf,200)'" in line for line in lines)

    page = next(p for p in ui_ir.pages if p.title == "Resolution parameters")
    (slider,) = page.widgets
    assert slider.kind == "slider"
    assert (slider.from_, slider.to, slider.resolution) == (0.0, 10.0, 1.0)

    # byte-identical across repeated compilations
    again_compute, again_ui = lower(pendulum_view)
    assert emit_script(again_compute, pendulum_view.doc.display) == script
    assert emit_ui(again_ui) == emit_ui(ui_ir)


def test_widget_selection_property():
    # slider <=> min, max and increment all present (editable); entry
    # otherwise when editable; nothing when hidden -- all 2^4 combinations
    pos = SourcePos(1, 1)
    for has_min in (False, True):
        for has_max in (False, True):
            for has_inc in (False, True):
                for hidden in (False, True):
                    param = ScalarParam(
                        label="p",
                        unit="",
                        name=LocalizedText({None: "p"}, pos),
                        default_value=1.0,
                        pos=pos,
                        min=0.0 if has_min else None,
                        max=10.0 if has_max else None,
                        increment=1.0 if has_inc else None,
                        visibility="hidden" if hidden else "editable",
                    )
                    widget = select_widget(param)
                    if hidden:
                        assert widget is None
                    elif has_min and has_max and has_inc:
                        assert widget == "slider"
                    else:
                        assert widget == "entry"


def test_validation_suite_corpus_and_seeded_mutations():
    # the corpus covers: ode (pendulum), curve (tangent), parametric curve
    # (lissajous), implicit curve (conic), surface, nonlinear system
    # (intersection), pde (poisson), database (acids), matrix (matrices)
    corpus = {p.stem: p.read_text(encoding="utf-8") for p in CORPUS.glob("*.xml")}
    for required in (
        "pendulum",
        "tangent",
        "lissajous",
        "conic",
        "surface",
        "intersection",
        "poisson",
        "acids",
        "matrices",
    ):
        assert required in corpus, f"corpus is missing {required}"
    for name, text in sorted(corpus.items()):
        report = validate(parse_document(text, doc_id=name))
        assert report.errors == [], f"{name}: {report.errors}"

    pendulum = corpus["pendulum"]

    # dangling reference
    mutated = pendulum.replace('<drawcurve2d ref="theta_lin"/>', '<drawcurve2d ref="ghost"/>')
    report = validate(parse_document(mutated))
    assert [e.code for e in report.errors] == ["unresolved-ref"]
    assert "ghost" in report.errors[0].message

    # duplicate label: a second scalar also named L
    mutated = pendulum.replace(
        "<point label=\"point0\">",
        '<scalar label="L"><name>Copy</name><value>2</value></scalar>'
        '<point label="point0">',
    )
    report = validate(parse_document(mutated))
    assert [e.code for e in report.errors] == ["duplicate-label"]

    # expression arity error is caught at parse time, with a position
    from simforge.document import DocumentParseError

    mutated = pendulum.replace(
        "<derivative>theta_dot</derivative>",
        "<derivative>sin(theta_dot, theta)</derivative>",
    )
    with pytest.raises(DocumentParseError) as err:
        parse_document(mutated)
    assert len(err.value.errors) == 1
    assert "argument" in err.value.errors[0].message


def test_session_round_trip_1000_random(pendulum_doc, pendulum_irs):
    compute_ir, _ = pendulum_irs
    rng = np.random.default_rng(42)
    for _ in range(1000):
        overrides = {
            "L": float(rng.uniform(0.1, 5.0)),
            "g0": float(rng.uniform(0.5, 25.0)),
            "theta_0": float(rng.uniform(-3.14, 3.14)),
            "tf": float(rng.uniform(0.0, 10.0)),
        }
        valuation, _ = make_valuation(compute_ir, overrides)
        loaded, warnings = load_session(
            save_session(valuation, "pendulum"), pendulum_doc, ir=compute_ir
        )
        assert loaded == valuation and warnings == []


def test_service_contract_headless():
    app = create_app(ServiceConfig(simulations_dir=CORPUS))
    with TestClient(app) as client:
        created = client.post("/api/simulations/pendulum/sessions", json={})
        assert created.status_code == 201
        data = created.json()
        sid = data["sessionId"]
        before = data["result"]["series"]["theta"]["y"]
        assert len(before) == 200

        patched = client.patch(
            f"/api/sessions/{sid}/params", json={"theta_0": 1.0}
        )
        assert patched.status_code == 200
        after = patched.json()["result"]["series"]["theta"]["y"]
        assert max(abs(a - b) for a, b in zip(before, after)) > 0

        # isolation across two concurrent sessions
        other = client.post("/api/simulations/pendulum/sessions", json={}).json()
        client.patch(f"/api/sessions/{other['sessionId']}/params", json={"tf": 5.0})
        mine = client.get(f"/api/sessions/{sid}/session-file").text
        theirs = client.get(
            f"/api/sessions/{other['sessionId']}/session-file"
        ).text
        assert "tf = 2" in mine and "tf = 5" in theirs
        assert "theta_0 = 1" in mine and "theta_0 = 2" in theirs

        assert client.get("/api/sessions/deadbeef/plot/0.svg").status_code == 404


def test_static_publisher_deterministic(tmp_path):
    source = tmp_path / "docs"
    source.mkdir()
    for name in ("pendulum.xml", "lissajous.xml"):
        shutil.copy(CORPUS / name, source / name)
    registry = SimulationRegistry(source)

    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    names_a = sorted(p.name for p in publish_static(registry, out_a))
    publish_static(registry, out_b)
    assert names_a == [
        "index.html",
        "lissajous.html",
        "lissajous.svg",
        "pendulum.html",
        "pendulum.svg",
    ]

    def tree(root: Path) -> dict:
        return {
            str(p.relative_to(root)): p.read_bytes()
            for p in sorted(root.rglob("*"))
            if p.is_file()
        }

    assert tree(out_a) == tree(out_b)
