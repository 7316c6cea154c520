import shutil
import subprocess
import sys

import pytest

from pxp_plots.cli import main
from pxp_plots.contract import ContractError, read_manifest, read_table
from pxp_plots.render import KINDS, render


class TestContract:
    def test_manifest_required(self, tmp_path):
        with pytest.raises(ContractError, match="manifest"):
            read_manifest(tmp_path)

    def test_missing_column_message_lists_expected_and_found(self, synthetic_run):
        run = synthetic_run("fig2-entanglement")
        with pytest.raises(ContractError) as err:
            read_table(run, "series.csv", ["time", "entropy"])
        assert "entropy" in str(err.value)
        assert "found" in str(err.value)

    def test_non_numeric_cell(self, synthetic_run, tmp_path):
        run = synthetic_run("fig1b-micromotion")
        path = run / "micromotion.csv"
        content = path.read_text().splitlines()
        content[1] = content[1].rsplit(",", 1)[0] + ",not-a-number"
        path.write_text("\n".join(content) + "\n")
        with pytest.raises(ContractError, match="non-numeric"):
            read_table(run, "micromotion.csv", ["time", "density"])


class TestRenderAllKinds:
    @pytest.mark.parametrize("kind", KINDS)
    def test_renders_png_and_svg(self, synthetic_run, kind):
        run = synthetic_run(kind)
        written = render(run)
        names = {p.name for p in written}
        assert names == {f"{kind}.png", f"{kind}.svg"}
        for p in written:
            assert p.stat().st_size > 0

    @pytest.mark.parametrize("kind", KINDS)
    def test_deterministic(self, synthetic_run, kind, tmp_path):
        run = synthetic_run(kind)
        a = render(run, out_dir=tmp_path / "a")
        b = render(run, out_dir=tmp_path / "b")
        for pa, pb in zip(a, b):
            assert pa.read_bytes() == pb.read_bytes()

    def test_read_only_over_inputs(self, synthetic_run, tmp_path):
        run = synthetic_run("fig3c-phase-diagram")
        before = {p.name: p.read_bytes() for p in run.iterdir()}
        render(run, out_dir=tmp_path / "out")
        after = {p.name: p.read_bytes() for p in run.iterdir()}
        assert before == after


class TestFailureModes:
    def test_missing_column_fails_without_partial_file(self, synthetic_run, tmp_path):
        run = synthetic_run("fig2-entanglement")
        series = run / "series.csv"
        lines = series.read_text().splitlines()
        header = lines[0].split(",")
        drop = header.index("ghz_fidelity")
        rewritten = [",".join(c for i, c in enumerate(line.split(","))
                              if i != drop) for line in lines]
        series.write_text("\n".join(rewritten) + "\n")
        out = tmp_path / "out"
        with pytest.raises(ContractError, match="ghz_fidelity"):
            render(run, out_dir=out)
        assert not out.exists() or not any(out.iterdir())

    def test_corrupted_csv_nonzero_exit(self, synthetic_run, tmp_path, capsys):
        run = synthetic_run("fig4-hardware")
        (run / "heatmaps.csv").write_text("cycle,site\n1\n")
        rc = main([str(run), "--out", str(tmp_path / "o")])
        assert rc != 0
        assert "render error" in capsys.readouterr().err

    def test_unknown_kind(self, synthetic_run):
        run = synthetic_run("fig2-entanglement")
        (run / "manifest.json").write_text(
            '{"scenario": "fig99-unknown"}')
        with pytest.raises(ContractError, match="no renderer"):
            render(run)


class TestCLI:
    def test_cli_renders(self, synthetic_run, tmp_path, capsys):
        run = synthetic_run("fig3a-domainwall")
        rc = main([str(run), "--out", str(tmp_path / "figs")])
        assert rc == 0
        printed = capsys.readouterr().out.strip().splitlines()
        assert len(printed) == 2
        assert (tmp_path / "figs" / "fig3a-domainwall.png").is_file()

    def test_kind_override(self, synthetic_run, tmp_path):
        run = synthetic_run("fig3a-domainwall")
        rc = main([str(run), "--kind", "fig3a-domainwall",
                   "--out", str(tmp_path / "f2")])
        assert rc == 0


@pytest.mark.skipif(shutil.which("driven-pxp") is None,
                    reason="primary package CLI not installed")
class TestEndToEnd:
    def test_render_real_run(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            '{"scenario": "fig3a-domainwall",'
            ' "output": {"directory": "%s"}}' % (tmp_path / "run"))
        proc = subprocess.run(["driven-pxp", "run", str(cfg)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        rc = main([str(tmp_path / "run"), "--out", str(tmp_path / "figs")])
        assert rc == 0
        assert (tmp_path / "figs" / "fig3a-domainwall.svg").is_file()
