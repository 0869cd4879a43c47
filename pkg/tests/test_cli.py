import re

import pytest

from liecograph.cli import main, parse_expression
from liecograph.elements import GeneratorTable, GraphElement, TreeElement
from liecograph.errors import ArityMismatch, ParseError, UnknownGenerator

from conftest import FIXTURES


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


S2 = str(FIXTURES / "s2.alg")
CP2 = str(FIXTURES / "cp2.alg")
S2_CO = str(FIXTURES / "s2.coalg")
CP2_CO = str(FIXTURES / "cp2.coalg")


class TestPair:
    def test_repeated_label_example(self, capsys):
        code, out, _ = run(capsys, "pair", "G[3; 1->2, 2->3](a,a,b)",
                           "[[a,b],a]", "--gens", "a:2,b:2")
        assert code == 0 and out == "-1\n"

    def test_product_notation_matches_brackets(self, capsys):
        _, out1, _ = run(capsys, "pair", "a|b", "(a*b)", "--gens", "a:2,b:2")
        _, out2, _ = run(capsys, "pair", "a|b", "[a,b]", "--gens", "a:2,b:2")
        assert out1 == out2

    def test_rational_coefficients(self, capsys):
        code, out, _ = run(capsys, "pair", "1/2 a|b", "[a,b]",
                           "--gens", "a:2,b:2")
        assert code == 0
        assert re.fullmatch(r"-?\d+(/\d+)?\n", out)


class TestExpressionParsing:
    TABLE = GeneratorTable([("a", 2), ("b", 3)])

    def test_bar_word(self):
        g = parse_expression("a|b|a", self.TABLE)
        assert isinstance(g, GraphElement) and not g.is_zero()

    def test_graph_literal_roundtrip(self):
        g = parse_expression("G[3; 1->2, 3->2](a,b,a)", self.TABLE)
        assert isinstance(g, GraphElement)

    def test_tree_literals_agree(self):
        t1 = parse_expression("[[a,b],a]", self.TABLE, kind="tree")
        t2 = parse_expression("(a*b)*a", self.TABLE, kind="tree")
        assert t1.terms == t2.terms

    def test_linear_combination(self):
        g = parse_expression("2 a|b - 1/3 b|a", self.TABLE)
        assert len(g.terms) == 2

    def test_unknown_generator(self):
        with pytest.raises(UnknownGenerator):
            parse_expression("q|b", self.TABLE)

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            parse_expression("G[3; 1->2, 2->3](a,b)", self.TABLE)

    def test_parse_error_carries_position(self):
        with pytest.raises(ParseError) as e:
            parse_expression("a|b +", self.TABLE)
        assert e.value.col is not None


class TestVerbs:
    def test_cobracket_deterministic_and_reparsable(self, capsys):
        code, out, _ = run(capsys, "cobracket", "a|b|c",
                           "--gens", "a:2,b:2,c:4")
        code2, out2, _ = run(capsys, "cobracket", "a|b|c",
                             "--gens", "a:2,b:2,c:4")
        assert code == code2 == 0 and out == out2
        table = GeneratorTable([("a", 2), ("b", 2), ("c", 4)])
        for line in out.strip().split("\n"):
            coeff, lit1, lit2 = line.split("\t")
            for lit in (lit1, lit2):
                g = parse_expression(lit, table)
                assert isinstance(g, GraphElement) and not g.is_zero()

    def test_normalize(self, capsys):
        code, out, _ = run(capsys, "normalize", "b|a", "--gens", "a:2,b:2")
        assert code == 0 and out == "a|b\t-1\n"

    def test_iszero_zero(self, capsys):
        code, out, _ = run(capsys, "iszero", "a|b + b|a",
                           "--gens", "a:2,b:2")
        assert code == 0 and out == "zero\n"

    def test_iszero_nonzero_has_witness(self, capsys):
        code, out, _ = run(capsys, "iszero", "a|b", "--gens", "a:2,b:2")
        assert code == 0
        assert out.startswith("nonzero\n# witness")

    def test_lie_normalize_rewrites_to_combs(self, capsys):
        code, out, _ = run(capsys, "lie-normalize", "[a,[b,a]]",
                           "--gens", "a:2,b:3")
        assert code == 0
        for line in out.strip().split("\n"):
            expr, coeff = line.split("\t")
            assert expr.startswith("[[") or expr.count("[") == 1

    def test_lie_normalize_kills_jacobi(self, capsys):
        combo = "[[a,b],c] - [a,[b,c]] + [b,[a,c]]"
        code, out, _ = run(capsys, "lie-normalize", combo,
                           "--gens", "a:2,b:2,c:2")
        assert code == 0 and out == ""

    def test_pi_table_with_header(self, capsys):
        code, out, _ = run(capsys, "pi", S2, "--window", "2..4")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("# caps:")
        assert lines[1:] == ["2\t1", "3\t1", "4\t0"]

    def test_pi_deterministic(self, capsys):
        _, out1, _ = run(capsys, "pi", S2, "--window", "2..4", "--oracle")
        _, out2, _ = run(capsys, "pi", S2, "--window", "2..4", "--oracle")
        assert out1 == out2

    def test_harrison_matches_pi_one_degree_down(self, capsys):
        _, pi_out, _ = run(capsys, "pi", S2, "--window", "2..4")
        _, h_out, _ = run(capsys, "harrison", S2, "--window", "1..3")
        pi = dict(tuple(map(int, l.split("\t")))
                  for l in pi_out.strip().split("\n")[1:])
        h = dict(tuple(map(int, l.split("\t")))
                 for l in h_out.strip().split("\n")[1:])
        assert all(pi[d] == h[d - 1] for d in (2, 3, 4))

    def test_ss_formal_pages_agree(self, capsys):
        code, out, _ = run(capsys, "ss", CP2, "--window", "1..5",
                           "--pages", "3")
        assert code == 0
        rows = [l.split("\t") for l in out.strip().split("\n")[1:]]
        by_page = {}
        for r, w, d, dim in rows:
            by_page.setdefault(int(r), {})[(int(w), int(d))] = int(dim)
        assert by_page[2] == by_page[3]

    def test_dual_check_pass(self, capsys):
        code, out, _ = run(capsys, "dual-check", S2, S2_CO,
                           "--cap-weight", "4", "--cap-degree", "8")
        assert code == 0 and out.endswith("pass\n")

    def test_dual_check_mismatch_is_an_input_error(self, capsys):
        code, _, err = run(capsys, "dual-check", CP2, S2_CO,
                           "--cap-weight", "3", "--cap-degree", "6")
        assert code == 1 and "NotDual" in err

    def test_enumerate_counts(self, capsys):
        _, out, _ = run(capsys, "enumerate", "graphs", "3")
        assert len(out.strip().split("\n")) == 12
        _, out, _ = run(capsys, "enumerate", "trees", "4")
        assert len(out.strip().split("\n")) == 120


class TestErrorsAndCaps:
    def test_unknown_generator_exits_1(self, capsys):
        code, _, err = run(capsys, "iszero", "q|b", "--gens", "a:2,b:2")
        assert code == 1 and "UnknownGenerator" in err

    def test_missing_file_exits_1(self, capsys):
        code, _, err = run(capsys, "pi", "/nonexistent.alg")
        assert code == 1

    def test_cap_too_small_exits_2(self, capsys):
        code, _, err = run(capsys, "pi", S2, "--window", "2..8",
                           "--cap-weight", "3", "--cap-degree", "4")
        assert code == 2 and "cap-too-small" in err

    def test_env_cap_override(self, capsys, monkeypatch):
        monkeypatch.setenv("LIECOGRAPH_CAP_OVERRIDE", "3,4")
        code, _, err = run(capsys, "pi", S2, "--window", "2..8")
        assert code == 2  # the small override bites exactly like the flags

    def test_env_cap_override_malformed(self, capsys, monkeypatch):
        monkeypatch.setenv("LIECOGRAPH_CAP_OVERRIDE", "bogus")
        code, _, err = run(capsys, "pi", S2, "--window", "2..4")
        assert code == 1
