from pathlib import Path

import pytest

from cli.dot import export_dot
from cli.dsl import format_document, parse_document, quote_name
from corpus import entry_by_name
from corpus.figures import fig3_level
from utils.error.errors import DslSemanticError, DslSyntaxError, PreconditionFailed

ASSETS = Path(__file__).resolve().parents[2] / "assets" / "posets"


def load(name: str):
    return parse_document((ASSETS / name).read_text(encoding="utf-8"))


class TestAssets:
    @pytest.mark.parametrize("entry_name", ["fig1", "fig2", "fig3", "omega-chain", "pentagon"])
    def test_source_matches_the_corpus_family(self, entry_name):
        entry = entry_by_name(entry_name)
        family = load(entry.source).family()
        start = entry.family.min_level
        for level in (start, start + 1, start + 2):
            parsed, built = family.instantiate(level), entry.family.instantiate(level)
            assert parsed.elements == built.elements
            assert parsed.structurally_equal(built)
            assert {d.chain_id for d in parsed.decls} == {d.chain_id for d in built.decls}

    @pytest.mark.parametrize("entry_name", ["fig1", "fig2", "fig3", "omega-chain"])
    def test_schema_oracles_agree(self, entry_name):
        entry = entry_by_name(entry_name)
        family = load(entry.source).family()
        d = entry.family.instantiate(4)
        for schema in entry.family.schemas:
            parsed = family.schema(schema.name)
            assert parsed.tail_oracle(d) == schema.tail_oracle(d)
            assert sorted(parsed.members(4)) == sorted(schema.members(4))

    def test_empty_poset(self):
        d = load("empty.poset").dposet()
        assert len(d) == 0

    def test_spaces(self):
        doc = load("finite.space")
        assert doc.space("sierpinski").opens == (0b00, 0b10, 0b11)
        assert len(doc.space("vee_alexandrov").opens) == 5

    def test_missing_names(self):
        doc = load("finite.space")
        with pytest.raises(PreconditionFailed):
            doc.family("nope")
        with pytest.raises(PreconditionFailed):
            doc.space("nope")


class TestPrinter:
    @pytest.mark.parametrize("name", ["fig1.poset", "fig2.poset", "fig3.poset", "chain.poset", "finite.space"])
    def test_print_is_stable(self, name):
        once = format_document(load(name))
        twice = format_document(parse_document(once))
        assert once == twice

    def test_printed_family_expands_identically(self):
        printed = parse_document(format_document(load("fig2.poset")))
        assert printed.dposet(level=4).structurally_equal(load("fig2.poset").dposet(level=4))

    @pytest.mark.parametrize("name,quoted", [
        ("a", "a"), ("(1,w)", "(1,w)"), ("col:1", "col:1"), ("omega-chain", '"omega-chain"'), ("le", '"le"'),
    ])
    def test_quote_name(self, name, quoted):
        assert quote_name(name) == quoted


class TestErrors:
    def test_empty_file(self):
        with pytest.raises(DslSyntaxError):
            parse_document("")

    def test_missing_semicolon_position(self):
        with pytest.raises(DslSyntaxError) as exc_info:
            parse_document("poset p {\n  elem a b\n}\n")
        assert exc_info.value.line == 3
        assert str(exc_info.value).startswith("[E_DSL_SYNTAX] error:")

    def test_undeclared_element(self):
        with pytest.raises(DslSemanticError) as exc_info:
            parse_document("poset p {\n  elem a;\n  le a b;\n}\n")
        assert exc_info.value.line == 3
        assert "unknown element 'b'" in exc_info.value.text

    def test_cycle(self):
        with pytest.raises(DslSemanticError, match="order cycle"):
            parse_document("poset p { elem a b; le a b a; }")

    def test_incoherent_chain(self):
        text = "poset p { elem 1 2 x y; le 1 2 x y; chain 1 2 -> y id c; }"
        with pytest.raises(DslSemanticError, match="least upper bound is x"):
            parse_document(text)

    def test_unknown_variable(self):
        text = "poset p { family N vars m { elem (m,k+1); } }"
        with pytest.raises(DslSemanticError, match="unknown variable 'k'"):
            parse_document(text)

    def test_space_from_family(self):
        text = (ASSETS / "fig3.poset").read_text(encoding="utf-8") + "\nspace s from fig3;\n"
        with pytest.raises(DslSemanticError, match="is a family"):
            parse_document(text)

    def test_duplicate_block(self):
        with pytest.raises(DslSemanticError, match="declared twice"):
            parse_document("poset p { elem a; }\nposet p { elem b; }")


class TestDot:
    def test_fig3_counts(self):
        text = export_dot(fig3_level(3), "fig3")
        lines = text.splitlines()
        nodes = [l for l in lines if l.strip().endswith(";") and "->" not in l and "=" not in l]
        solid = [l for l in lines if "->" in l and "dashed" not in l]
        dashed = [l for l in lines if "dashed" in l]
        assert (len(nodes), len(solid), len(dashed)) == (5, 4, 1)
        assert '"3" -> "w" [style=dashed, label="nat"];' in text

    def test_fig1_counts(self):
        d = entry_by_name("fig1").family.instantiate(3)
        lines = export_dot(d, "fig1").splitlines()
        assert sum("->" in l and "dashed" not in l for l in lines) == 9
        assert sum("dashed" in l for l in lines) == 3

    def test_output_is_deterministic(self):
        assert export_dot(fig3_level(5)) == export_dot(fig3_level(5))
