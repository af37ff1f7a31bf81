import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotforge.interp import (DieUponComplaint, Session, replay, run_line,
                              run_script)
from knotforge.parser import parse_line


@pytest.fixture()
def session(tmp_path):
    return Session(seed=1, cwd=str(tmp_path))


def outputs(session, line):
    return run_line(session, line)


class TestParseLine:
    def test_semicolon_multi(self):
        invs = parse_line("luxo;background = white; mode cb; vscale = 0.8")
        assert len(invs) == 4
        assert invs[0].kind == "command"
        assert invs[1].kind == "assign"
        assert invs[1].name == "background"
        assert invs[3].value == "0.8"

    def test_comment_and_repeat(self):
        invs = parse_line("#2 split % splits each edge, twice")
        assert len(invs) == 2
        assert all(i.tokens == ["split"] for i in invs)

    def test_empty(self):
        assert parse_line("") == []
        assert parse_line("   % just a comment") == []

    def test_include(self):
        invs = parse_line("< myscript.kps")
        assert invs[0].kind == "include"
        assert invs[0].path == "myscript.kps"

    def test_redirect(self):
        invs = parse_line("parameters > pars.txt")
        assert invs[0].redirect == "pars.txt"
        assert invs[0].tokens == ["parameters"]

    def test_quotes(self):
        invs = parse_line('until safe "ago 55"')
        assert invs[0].tokens == ["until", "safe", "ago 55"]

    def test_unterminated_quote_is_error_value(self):
        invs = parse_line('alias x "broken')
        assert invs[0].kind == "error"

    @settings(max_examples=500, deadline=None)
    @given(st.text(max_size=60))
    def test_total_on_arbitrary_text(self, text):
        for inv in parse_line(text):
            assert inv.kind in ("command", "assign", "include", "error")

    @settings(max_examples=100, deadline=None)
    @given(st.binary(max_size=40))
    def test_total_on_bytes(self, blob):
        parse_line(blob)


class TestDispatch:
    def test_undo_restores_each_mutator(self, session):
        run_line(session, "torus 2 3 40")
        base = session.link.all_vertices().copy()
        for cmd in ("scale 2", "translate 1 2 3", "about x 30", "split",
                    "jitter 0.05", "reflect y", "delete downto 20",
                    "shift 3", "revbeads"):
            run_line(session, cmd)
            run_line(session, "undo")
            assert np.array_equal(session.link.all_vertices(), base), cmd

    def test_undo_fuzzer(self, session):
        # random mutating commands from a pool; undo must restore the
        # link exactly after each one
        import numpy as np
        g = np.random.default_rng(31)
        run_line(session, "torus 2 3 36")
        pool = ["scale 2", "scale 0.5 2 1.5", "translate 1 -2 0.5",
                "about y 41", "about z -13", "reflect x", "reflect zy",
                "split", "jitter 0.02", "shift 5", "revbeads",
                "duplicate", "nbeads mult 2", "nbeads +7",
                "refine equilateral 0.9", "delete downto 12",
                "cut pieces 3", "hide 0", "head 10", "project 0 0 1",
                "fitto 10", "fitto avlength 2", "centre mass",
                "align axes", "swap random", "colour 0 red"]
        for _ in range(60):
            cmd = pool[int(g.integers(0, len(pool)))]
            before = [c.vertices.copy() for c in session.link.components]
            closed = [c.closed for c in session.link.components]
            out = run_line(session, cmd)
            if any(line.startswith("***") for line in out):
                continue
            run_line(session, "undo")
            now = session.link.components
            assert len(now) == len(before), cmd
            for c, v, was_closed in zip(now, before, closed):
                assert np.array_equal(c.vertices, v), cmd
                assert c.closed == was_closed, cmd

    def test_tfunction_drains_between_commands(self, session):
        run_line(session, "tfunction 0 unknot 16 2")
        assert session.link.nbeads == 0      # queued, not yet run
        run_line(session, "version")
        assert session.link.nbeads == 16

    def test_headless_and_attached_artifacts_match(self, tmp_path):
        script = ("torus 2 3 40\njitter 0.03\nago 100\n"
                  "save result\npsout pic\n")
        outs = {}
        for label, headless in (("nog", True), ("attached", False)):
            work = tmp_path / label
            work.mkdir()
            s = Session(seed=4, cwd=str(work), headless=headless)
            run_script(s, script, emit=lambda line: None)
            outs[label] = ((work / "result").read_bytes(),
                           (work / "pic.eps").read_bytes())
        assert outs["nog"] == outs["attached"]

    def test_undo_is_single_level_swap(self, session):
        run_line(session, "unknot 10 2")
        a = session.link.all_vertices().copy()
        run_line(session, "scale 2")
        b = session.link.all_vertices().copy()
        run_line(session, "undo")
        assert np.array_equal(session.link.all_vertices(), a)
        run_line(session, "undo")
        assert np.array_equal(session.link.all_vertices(), b)

    def test_presets_monotone(self, session):
        ncur0 = session.params.get("ncur")
        nseg0 = session.params.get("nseg")
        run_line(session, "cheapo")
        assert session.params.get("ncur") < ncur0
        assert session.params.get("nseg") < nseg0
        run_line(session, "luxo")
        assert session.params.get("ncur") > ncur0
        assert session.params.get("nseg") > nseg0

    def test_unknown_command_complains(self, session):
        out = outputs(session, "zorblefrobnicate")
        assert out and out[0].startswith("***")

    def test_duc_aborts(self, session):
        run_line(session, "duc = true")
        with pytest.raises(DieUponComplaint):
            run_line(session, "definitelynotacommand")

    def test_unsupported_commands_complain(self, session):
        for cmd in ("imgout pic", "diagram 4 6 2", "id", "homfly-pt",
                    "tangle 2r", "mf out", "lua run x"):
            out = outputs(session, cmd)
            assert out and out[0].startswith("*** unsupported")

    def test_allocate_noticed(self, session):
        out = outputs(session, "allocate 10000")
        assert "note" in out[0]

    def test_alias_expansion(self, session):
        run_line(session, 'alias mk "unknot $0 $1"')
        run_line(session, "mk 12 3")
        assert session.link.nbeads == 12

    def test_tilde_alias_dropped_on_reset(self, session):
        run_line(session, 'alias ~tmp "split"')
        run_line(session, 'alias keepme "split"')
        run_line(session, "reset")
        assert "keepme" in session.aliases
        assert "~tmp" not in session.aliases

    def test_parameter_assignment_and_listing(self, session):
        run_line(session, "close = 0.2")
        assert session.params.get("close") == 0.2
        out = outputs(session, "parameters ps")
        assert any(line.startswith("pserase") for line in out)
        assert any(line.startswith("psmode") for line in out)

    def test_unknown_parameter(self, session):
        out = outputs(session, "nosuchparam = 3")
        assert out[0].startswith("***")

    def test_vscale_updates_view(self, session):
        run_line(session, "vscale = 0.8")
        assert session.view.vscale == pytest.approx(0.8)

    def test_until_safe(self, session):
        run_line(session, "unknot 30 5")
        run_line(session, "scale 0.001")
        run_line(session, 'until safe "scale 2"')
        from knotforge.dynamics import check_safe
        assert check_safe(session.link, session.params.get("close")).safe

    def test_redirect_writes_file(self, session, tmp_path):
        run_line(session, "parameters > pars.txt")
        text = (tmp_path / "pars.txt").read_text()
        assert "close" in text

    def test_save_eps_extension(self, session, tmp_path):
        from helpers import valid_eps
        run_line(session, "torus 2 3 60")
        run_line(session, "save pic.eps")
        assert valid_eps((tmp_path / "pic.eps").read_bytes())

    def test_knot_command(self, session):
        out = outputs(session, "knot")
        assert session.link.ncomponents >= 1
        out = outputs(session, "knot 2")
        assert session.link.ncomponents == 2

    def test_timers(self, session):
        run_line(session, "timer start gumby")
        out = outputs(session, "timer check gumby")
        assert "gumby" in out[0]

    def test_load_sum_composition(self, session):
        run_line(session, "load 3.1")
        n0 = session.link.nbeads
        run_line(session, "load sum 3.1 0")
        assert session.link.ncomponents == 1
        assert session.link.nbeads == pytest.approx(2 * n0, abs=2)

    def test_load_combine(self, session):
        run_line(session, "load 3.1")
        run_line(session, "load combine 2.2.1")
        assert session.link.ncomponents == 3

    def test_rotate_fix_equals_about(self, session):
        run_line(session, "torus 2 3 40")
        run_line(session, "about x 33")
        ref = session.link.all_vertices().copy()
        run_line(session, "undo")
        run_line(session, "rotate x 33")
        run_line(session, "rotate fix")
        assert np.allclose(session.link.all_vertices(), ref, atol=1e-12)

    def test_mode_and_head(self, session):
        run_line(session, "unknot 50 5")
        run_line(session, "mode cb")
        assert session.display_mode == "cb"
        run_line(session, "head 22")
        assert session.link.head_visible == 22
        run_line(session, "head off")
        assert session.link.head_visible is None

    def test_dowker_projection_switch(self, session):
        run_line(session, "torus 2 3 60")
        run_line(session, "rotate x 30")
        run_line(session, "dowker projection view")
        out_view = outputs(session, "xing")
        run_line(session, "dowker projection z")
        out_z = outputs(session, "xing")
        assert out_z == ["crossings 3"]
        assert out_view[0].startswith("crossings")


class TestScripts:
    def test_eps_script_headless(self, session, tmp_path):
        script = "\n".join([
            "mode s",
            "load 2.2.1",
            "psout knotLine",
            "psmode = 41     % default psmode mode is 40",
            "psout knotRolfsen",
            "psmode = 45",
            "psout knotOther",
        ])
        run_script(session, script, emit=lambda s: None)
        for name in ("knotLine.eps", "knotRolfsen.eps", "knotOther.eps"):
            assert (tmp_path / name).exists(), name
        from helpers import valid_eps
        assert valid_eps((tmp_path / "knotLine.eps").read_bytes())

    def test_exit_stops_script(self, session):
        script = "unknot 10 2\nexit\nscale 2\n"
        run_script(session, script, emit=lambda s: None)
        v = session.link.all_vertices()
        assert np.abs(v).max() == pytest.approx(2.0, abs=1e-9)

    def test_empty_script_identity(self, session):
        before = session.link.ncomponents
        run_script(session, "", emit=lambda s: None)
        assert session.link.ncomponents == before

    def test_double_split_quadruples(self, session):
        run_line(session, "unknot 40 5")
        run_line(session, "#2 split")
        assert session.link.nbeads == 160

    def test_include(self, session, tmp_path):
        (tmp_path / "inner.kps").write_text("unknot 14 2\nscale 3\n")
        run_line(session, "< inner.kps")
        assert session.link.nbeads == 14

    def test_replay_reproduces_native_save(self, session, tmp_path):
        lines = [
            "torus 2 3 50",
            "jitter 0.05",
            "#2 split",
            "fitto mindist 0.5",
            "ago 200",
            "delete downto 0",
            "swap. = none" if False else "reflect r",
            "save final",
        ]
        for line in lines:
            run_line(session, line)
        blob = (tmp_path / "final").read_bytes()
        # replay the recorded history in a fresh session
        os.remove(tmp_path / "final")
        replay(session.history, seed=1, cwd=str(tmp_path))
        blob2 = (tmp_path / "final").read_bytes()
        assert blob == blob2


class TestCli:
    def test_nog_stdin(self, tmp_path, monkeypatch, capsys):
        import io
        import sys
        from knotforge.cli import main
        monkeypatch.setattr(sys, "stdin",
                            io.StringIO("unknot 10 2\ninfo s\n"))
        monkeypatch.chdir(tmp_path)
        rc = main(["--nog"])
        captured = capsys.readouterr()
        assert rc == 0
        assert "1 components, 10 beads" in captured.out

    def test_duc_exit_code(self, tmp_path, monkeypatch, capsys):
        import io
        import sys
        from knotforge.cli import main
        monkeypatch.setattr(sys, "stdin",
                            io.StringIO("duc = true\nnotacommand\n"))
        monkeypatch.chdir(tmp_path)
        rc = main(["--nog"])
        assert rc == 1

    def test_script_file(self, tmp_path, monkeypatch, capsys):
        from knotforge.cli import main
        script = tmp_path / "s.kps"
        script.write_text("unknot 12 3\npsout out\n")
        monkeypatch.chdir(tmp_path)
        rc = main(["--nog", "--script", str(script)])
        assert rc == 0
        assert (tmp_path / "out.eps").exists()
