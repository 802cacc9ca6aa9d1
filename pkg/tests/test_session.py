import numpy as np
import pytest

from simforge.compiler import lower
from simforge.document import parse_document, resolve_language
from simforge.render import (
    SessionFormatError,
    load_session,
    parse_session_text,
    save_session,
)
from simforge.runtime import make_valuation

from conftest import CORPUS


class TestSave:
    def test_pendulum_defaults(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        valuation, _ = make_valuation(compute_ir)
        text = save_session(valuation, "pendulum")
        lines = text.splitlines()
        assert lines[0] == "!session version=1 doc=pendulum"
        assert "L = 1" in lines
        assert "g0 = 9.81" in lines
        assert "tf = 2" in lines

    def test_matrix_format(self):
        text = save_session({"m": np.array([[1.0, 2.0], [3.0, 4.0]])}, "d")
        assert "m = [1 2; 3 4]" in text.splitlines()

    def test_full_precision_roundtrip_value(self):
        value = 0.1 + 0.2  # 0.30000000000000004
        text = save_session({"v": value}, "d")
        _, overrides = parse_session_text(text)
        assert overrides["v"] == value


class TestLoad:
    def test_override_single_parameter(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        text = "!session version=1 doc=pendulum\ntf = 4\n"
        valuation, warnings = load_session(text, pendulum_doc, ir=compute_ir)
        assert valuation["tf"] == 4.0
        assert valuation["L"] == 1.0  # others stay at defaults
        assert warnings == []

    def test_unknown_parameter_warned_and_skipped(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        text = "!session version=1 doc=pendulum\nbogus = 1\n"
        valuation, warnings = load_session(text, pendulum_doc, ir=compute_ir)
        assert "bogus" not in valuation
        assert any("unknown parameter bogus" in w for w in warnings)

    def test_out_of_bounds_clamped_with_warning(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        text = "!session version=1 doc=pendulum\ntf = 99\n"
        valuation, warnings = load_session(text, pendulum_doc, ir=compute_ir)
        assert valuation["tf"] == 10.0
        assert any("clamped" in w for w in warnings)

    def test_doc_id_mismatch(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        text = "!session version=1 doc=other\ntf = 4\n"
        with pytest.raises(SessionFormatError, match="other"):
            load_session(text, pendulum_doc, ir=compute_ir)

    def test_unparseable_line_reports_position(self):
        text = "!session version=1 doc=d\nok = 1\nnonsense here\n"
        with pytest.raises(SessionFormatError) as err:
            parse_session_text(text)
        assert err.value.line == 3

    def test_bad_number_reports_position(self):
        text = "!session version=1 doc=d\nv = twelve\n"
        with pytest.raises(SessionFormatError) as err:
            parse_session_text(text)
        assert err.value.line == 2

    def test_comments_and_blanks_ignored(self):
        text = "# hello\n\n!session version=1 doc=d\n# more\nv = 1\n"
        doc_id, overrides = parse_session_text(text)
        assert doc_id == "d" and overrides == {"v": 1.0}

    def test_missing_header(self):
        with pytest.raises(SessionFormatError, match="header"):
            parse_session_text("v = 1\n")


class TestRoundTrip:
    def test_save_load_identity(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        valuation, _ = make_valuation(compute_ir, {"tf": 7.0, "theta_0": 1.25})
        text = save_session(valuation, "pendulum")
        loaded, warnings = load_session(text, pendulum_doc, ir=compute_ir)
        assert loaded == valuation
        assert warnings == []

    def test_matrix_roundtrip(self):
        doc = parse_document(
            (CORPUS / "matrices.xml").read_text(encoding="utf-8"), doc_id="matrices"
        )
        compute_ir, _ = lower(resolve_language(doc, None))
        valuation, _ = make_valuation(
            compute_ir, {"A": [[0.5, -1.5], [2.25, 9.81]]}
        )
        text = save_session(valuation, "matrices")
        loaded, _ = load_session(text, doc, ir=compute_ir)
        assert np.array_equal(loaded["A"], valuation["A"])
        assert loaded["k"] == valuation["k"]

    def test_thousand_random_in_bounds_valuations(self, pendulum_doc, pendulum_irs):
        compute_ir, _ = pendulum_irs
        rng = np.random.default_rng(20260810)
        for _ in range(1000):
            overrides = {
                "L": float(rng.uniform(0.1, 10.0)),
                "g0": float(rng.uniform(1.0, 20.0)),
                "theta_0": float(rng.uniform(-3.14, 3.14)),
                "tf": float(rng.uniform(0.0, 10.0)),
            }
            valuation, _ = make_valuation(compute_ir, overrides)
            text = save_session(valuation, "pendulum")
            loaded, warnings = load_session(text, pendulum_doc, ir=compute_ir)
            assert loaded == valuation
            assert warnings == []
