import shutil

import pytest

from simforge.cli import main

from conftest import CORPUS


def _pendulum(tmp_path):
    target = tmp_path / "pendulum.xml"
    shutil.copy(CORPUS / "pendulum.xml", target)
    return target


class TestValidate:
    def test_corpus_document_passes(self, capsys):
        assert main(["validate", str(CORPUS / "pendulum.xml")]) == 0
        assert "OK" in capsys.readouterr().out

    def test_invalid_document_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.xml"
        bad.write_text(
            "<simulation><header><author>a</author><date>d</date></header>"
            '<display><window><axis2d><drawcurve2d ref="ghost"/></axis2d></window>'
            "</display></simulation>"
        )
        assert main(["validate", str(bad)]) == 1
        assert "ghost" in capsys.readouterr().out

    def test_malformed_xml_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.xml"
        bad.write_text("<simulation>")
        assert main(["validate", str(bad)]) == 1

    def test_missing_file_is_usage_error(self):
        assert main(["validate", "/nonexistent/file.xml"]) == 64

    def test_unknown_subcommand_is_usage_error(self):
        assert main(["frobnicate"]) == 64


class TestCompile:
    def test_emits_three_files(self, tmp_path, capsys):
        source = _pendulum(tmp_path)
        out = tmp_path / "out"
        assert main(["compile", str(source), "-o", str(out)]) == 0
        assert (out / "compute.json").is_file()
        assert (out / "ui.json").is_file()
        script = (out / "pendulum.sce").read_text(encoding="utf-8")
        assert "function [lhs]=f_pendulum(_t,_X)" in script

    def test_lang_flag(self, tmp_path):
        source = _pendulum(tmp_path)
        out = tmp_path / "out"
        assert main(["compile", str(source), "--lang", "french", "-o", str(out)]) == 0
        ui = (out / "ui.json").read_text(encoding="utf-8")
        assert "Paramètres de résolution" in ui


class TestRun:
    def test_equilibrium_csv(self, tmp_path, capsys):
        source = _pendulum(tmp_path)
        assert main(["run", str(source), "--set", "theta_0=0", "--out", "csv"]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        header = lines[0].split(",")
        theta_col = header.index("theta")
        for line in lines[1:]:
            value = float(line.split(",")[theta_col])
            assert abs(value) <= 1e-12

    def test_json_output(self, tmp_path, capsys):
        import json

        source = _pendulum(tmp_path)
        assert main(["run", str(source), "--out", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["series"]["theta"]["y"]) == 200

    def test_output_file(self, tmp_path):
        source = _pendulum(tmp_path)
        target = tmp_path / "result.csv"
        assert main(["run", str(source), "-o", str(target)]) == 0
        assert target.read_text().startswith("t,theta")

    def test_bad_set_is_usage_error(self, tmp_path):
        source = _pendulum(tmp_path)
        assert main(["run", str(source), "--set", "nonsense"]) == 64

    def test_unknown_symbol_is_runtime_error(self, tmp_path):
        source = _pendulum(tmp_path)
        assert main(["run", str(source), "--set", "nope=1"]) == 2

    def test_solver_failure_exit_2(self, tmp_path):
        doc = tmp_path / "diverge.xml"
        doc.write_text(
            """
            <simulation>
              <header><author>a</author><date>d</date></header>
              <compute>
                <nonlinearsystem label="n">
                  <unknown label="w"><initialguess>1</initialguess></unknown>
                  <residual>w^2+1</residual>
                </nonlinearsystem>
              </compute>
            </simulation>
            """
        )
        assert main(["run", str(doc)]) == 2


class TestRender:
    def test_writes_svg(self, tmp_path):
        source = _pendulum(tmp_path)
        target = tmp_path / "plot.svg"
        assert main(["render", str(source), "-o", str(target)]) == 0
        text = target.read_text(encoding="utf-8")
        assert text.startswith("<?xml") and "<svg" in text

    def test_bad_size_is_usage_error(self, tmp_path):
        source = _pendulum(tmp_path)
        assert main(["render", str(source), "--size", "huge"]) == 64


class TestPublishCommand:
    def test_publish_tree(self, tmp_path, capsys):
        sims = tmp_path / "sims"
        sims.mkdir()
        shutil.copy(CORPUS / "pendulum.xml", sims / "pendulum.xml")
        out = tmp_path / "site"
        assert main(["publish", str(sims), "-o", str(out)]) == 0
        assert (out / "index.html").is_file()
        assert (out / "sims" / "pendulum.html").is_file()

    def test_publish_invalid_doc_exit_1(self, tmp_path):
        sims = tmp_path / "sims"
        sims.mkdir()
        (sims / "bad.xml").write_text("<simulation>")
        assert main(["publish", str(sims), "-o", str(tmp_path / "site")]) == 1
