import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotforge import codes, measures
from knotforge.construct import (braid_close, braid_permutation, chain,
                                 conway_pretzel, line, lissajous,
                                 lissajous_safe, parse_braid, torus, unknot)
from knotforge.dynamics import check_safe
from knotforge.errors import (BadCount, BadSpec, EmptyWord, ParseError,
                              ZeroLength, ZeroTwist)


class TestUnknot:
    def test_regular_50gon(self):
        link = unknot(50, 5)
        assert link.ncomponents == 1
        v = link.components[0].vertices
        assert len(v) == 50
        assert np.allclose(np.linalg.norm(v, axis=1), 5.0, atol=1e-12)
        assert np.allclose(v[:, 2], 0.0)

    def test_triangle_edge(self):
        v = unknot(3, 1).components[0].vertices
        assert np.linalg.norm(v[1] - v[0]) == pytest.approx(np.sqrt(3),
                                                            abs=1e-12)

    def test_square_diagonal(self):
        v = unknot(4, 1).components[0].vertices
        assert np.linalg.norm(v[2] - v[0]) == pytest.approx(2.0, abs=1e-12)

    def test_too_few(self):
        with pytest.raises(BadCount):
            unknot(2, 1)


class TestTorus:
    def test_on_surface(self):
        link = torus(3, 5, 50, 11, 2)
        assert link.ncomponents == 1
        v = link.components[0].vertices
        assert len(v) == 50
        rho = np.sqrt(v[:, 0] ** 2 + v[:, 1] ** 2)
        surf = (rho - 11.0) ** 2 + v[:, 2] ** 2
        assert np.allclose(surf, 4.0, atol=1e-9)

    def test_hopf_type_link(self):
        link = torus(2, 2, 40, 10, 2)
        assert link.ncomponents == 2
        assert abs(measures.lnknum(link)[0, 1]) == 1

    def test_planar_circle(self):
        link = torus(1, 0, 30, 11, 2)
        acn, _ = measures.acn_writhe(link)
        assert acn == pytest.approx(0.0, abs=1e-9)

    def test_component_split(self):
        link = torus(4, 2, 80, 11, 2)
        assert link.ncomponents == 2
        assert link.nbeads == 80

    def test_bad_spec(self):
        with pytest.raises(BadSpec):
            torus(2, 3, 60, 2, 11)


class TestLissajous:
    def test_in_unit_cube(self):
        link, report = lissajous(1, 1, 1, 0, np.pi / 2, np.pi / 4, 60)
        v = link.all_vertices()
        assert len(v) == 60
        assert np.all(np.abs(v) <= 1.0 + 1e-12)
        assert link.components[0].closed
        assert report.min_distance > 0

    def test_retry_until_safe(self):
        link, params = lissajous_safe(seed=4, n=80)
        assert check_safe(link, 0.12).safe

    def test_minimal_beads(self):
        link, _ = lissajous(1, 1, 1, 0, 1, 2, 3)
        assert link.nbeads == 3


class TestChain:
    def test_ten_components_interlock(self):
        link = chain(10)
        assert link.ncomponents == 10
        mat = measures.lnknum(link)
        for i in range(9):
            assert abs(mat[i, i + 1]) == 1
        for i in range(10):
            for j in range(i + 2, 10):
                assert mat[i, j] == 0

    def test_single_circle(self):
        link = chain(1)
        assert link.ncomponents == 1
        acn, _ = measures.acn_writhe(link)
        assert acn == pytest.approx(0.0, abs=1e-9)

    def test_two_is_hopf(self):
        assert abs(measures.lnknum(chain(2))[0, 1]) == 1


class TestLine:
    def test_two_beads(self):
        link = line((5, 3, 1), (-4, 2, -7), 2)
        v = link.components[0].vertices
        assert np.allclose(v[0], [5, 3, 1])
        assert np.allclose(v[1], [-4, 2, -7])
        assert not link.components[0].closed

    def test_even_spacing(self):
        link = line((0, 0, 0), (10, 0, 0), 11)
        lens = link.components[0].edge_lengths()
        assert np.allclose(lens, 1.0, atol=1e-12)

    def test_degenerate(self):
        with pytest.raises(ZeroLength):
            line((1, 2, 3), (1, 2, 3), 2)


class TestBraidParse:
    def test_paper_example_one(self):
        w = parse_braid("(aB)^3Ca")
        assert w.render() == "aBaBaBCa"
        assert w.strands == 4

    def test_paper_example_two(self):
        w = parse_braid("e(D(Bc^2)^3Ca)^2b")
        assert w.render() == "eDBccBccBccCaDBccBccBccCab"
        assert w.strands == 6

    def test_negative_power_inverts(self):
        w = parse_braid("(ab)^-1")
        assert w.render() == "BA"

    def test_zero_power_vanishes(self):
        w = parse_braid("a(b)^0a")
        assert w.render() == "aa"

    def test_round_trip(self):
        for text in ("abC", "(aB)^3Ca", "e(D(Bc^2)^3Ca)^2b"):
            w = parse_braid(text)
            again = parse_braid(w.render())
            assert again.letters == w.letters

    def test_errors_carry_positions(self):
        for bad, pos in (("a(b", 1), ("ab)", 2), ("a^x", 1), ("a2b", 1)):
            with pytest.raises(ParseError) as err:
                parse_braid(bad)
            assert err.value.position == pos

    def test_empty(self):
        with pytest.raises(EmptyWord):
            parse_braid("   ")

    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=30))
    def test_fuzz_never_crashes(self, text):
        try:
            w = parse_braid(text)
            assert w.strands >= 2
            assert all(1 <= g <= 26 for g, _ in w.letters)
        except ParseError:
            pass


class TestBraidClose:
    def test_hopf_from_aa(self):
        link = braid_close(parse_braid("aa"))
        assert link.ncomponents == 2
        assert abs(measures.lnknum(link)[0, 1]) == 1

    def test_component_count_is_cycle_count(self):
        for text in ("a", "aa", "ab", "abab", "(aB)^3Ca",
                     "e(D(Bc^2)^3Ca)^2b", "aBaB"):
            w = parse_braid(text)
            perm = braid_permutation(w)
            # brute cycle count
            seen = set()
            cycles = 0
            for s in range(w.strands):
                if s in seen:
                    continue
                cycles += 1
                t = s
                while t not in seen:
                    seen.add(t)
                    t = perm[t]
            link = braid_close(w)
            assert link.ncomponents == cycles

    def test_closure_crossing_count(self):
        # the z projection of a closed braid shows exactly the letters
        w = parse_braid("aBaB")
        assert codes.xing(braid_close(w)) == 4

    def test_trefoil_from_aaa(self):
        link = braid_close(parse_braid("aaa"))
        code = codes.dowker(link)
        assert sorted(abs(x) for x in code) == [2, 4, 6]


class TestPretzel:
    def test_crossing_count(self):
        assert codes.xing(conway_pretzel("6,3,4")) == 13

    def test_trefoil(self):
        code = codes.dowker(conway_pretzel("1,1,1"))
        assert sorted(abs(x) for x in code) == [2, 4, 6]
        assert len({np.sign(x) for x in code}) == 1

    def test_two_two_link(self):
        link = conway_pretzel("2,2")
        assert link.ncomponents == 2
        assert abs(measures.lnknum(link)[0, 1]) == 2

    def test_single_odd_matches_torus(self):
        for p in (3, 5):
            pz = conway_pretzel(str(p))
            code = codes.dowker(pz)
            ref = torus(2, p, 80, 3.0, 1.2)
            assert sorted(abs(x) for x in code) \
                == sorted(abs(x) for x in codes.dowker(ref))

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            conway_pretzel("6,,4")
        with pytest.raises(ZeroTwist):
            conway_pretzel("6,0,4")


class TestConstructorSafety:
    def test_safe_at_default_scale(self):
        for link in (unknot(50, 5), torus(2, 3, 60), torus(3, 5, 50),
                     chain(4)):
            assert check_safe(link, 0.12).safe
