"""
Tests for the resource-inequality parser, evaluator and chaining calculus.
"""
from fractions import Fraction

import pytest

from qhelper.core.errors import ChainError, RIEvaluationError, RIParseError
from qhelper.core.qcore import EntropyKind, SystemLayout, bell_state, purify, random_pure
from qhelper.ricalc.ast import BinOp, Const, Entropic, Infinity, Resource, ResourceKind, Symbol
from qhelper.ricalc.calculus import cancel, certify, chain, derive, evaluate, evaluate_expr, scale
from qhelper.ricalc.library import (
    EA_CAPACITY, ENTANGLEMENT_DISTRIBUTION, FQSW, HELPER_QRST, LIBRARY, QRST, SCHUMACHER,
    STATE_MERGING, SUPERDENSE_CODING, TELEPORTATION, resolve,
)
from qhelper.ricalc.parser import parse, parse_expr, parse_file, to_text

# the five printed protocol RIs, then the helper variant
STATEMENTS = [SCHUMACHER, EA_CAPACITY, STATE_MERGING, FQSW, QRST, HELPER_QRST]


def merging_samples(count=50):
    layout = SystemLayout.of(A=2, B=2, R=2)
    return [random_pure(layout, [0, i]) for i in range(count)]


class TestParser:
    @pytest.mark.parametrize("text", STATEMENTS)
    def test_round_trip(self, text):
        ri = parse(text)
        assert parse(to_text(ri)) == ri
        assert to_text(parse(to_text(ri))) == to_text(ri)

    def test_merging_structure(self):
        ri = parse(STATE_MERGING)
        assert [t.resource.kind for t in ri.lhs] == [ResourceKind.STATE, ResourceKind.CBIT, ResourceKind.EBIT]
        assert ri.rhs[0].resource.key == "<psi_{|AB|R}>"
        coeff = ri.lhs[2].coeff
        assert coeff == Entropic(EntropyKind.H_COND, (("A",), ("B",)), "psi")

    def test_half_and_decimal_agree(self):
        assert parse("1/2 [qq] >= 0") == parse("0.5 [qq] >= 0")

    def test_system_runs_split_at_capitals(self):
        node = parse_expr("I(RA;C)")
        assert node.systems == (("R", "A"), ("C",))

    def test_primed_and_indexed_labels(self):
        node = parse_expr("H(A1B'|C)")
        assert node.systems == (("A1", "B'"), ("C",))

    def test_relative_and_noisy_resources(self):
        ri = parse(QRST)
        assert ri.rhs[0].resource == Resource(ResourceKind.RELATIVE, "N", "rho_A")
        assert parse(EA_CAPACITY).lhs[0].resource.kind is ResourceKind.NOISY

    def test_symbolic_coefficients(self):
        ri = parse(EA_CAPACITY)
        assert isinstance(ri.lhs[1].coeff, Infinity)
        assert ri.rhs[0].coeff == Symbol("Q", ("N",))

    def test_unicode_operators(self):
        assert parse("[q→q] + [qq] ≥ 2 [c→c]") == parse(SUPERDENSE_CODING)

    def test_juxtaposition_is_multiplication(self):
        assert parse_expr("2 H(A)") == parse_expr("2 * H(A)")
        assert isinstance(parse_expr("2 H(A)"), BinOp)

    def test_empty_side(self):
        assert parse("[qq] >= 0").rhs == ()
        assert to_text(parse("[qq] >= 0")) == "[qq] >= 0"

    @pytest.mark.parametrize("text, offset", [
        ("", 0),
        ("[qq] >=", 7),
        ("[qx] >= [qq]", 0),
        ("2 [qq] >= [q->q] $", 17),
        ("[qq] ≥ [qq] $", 14),
        ("H(a) [qq] >= 0", 2),
        ("1/0 [qq] >= 0", 0),
        ("[qq] [qq] >= 0", 5),
    ])
    def test_malformed_offsets(self, text, offset):
        with pytest.raises(RIParseError) as info:
            parse(text)
        assert info.value.offset == offset
        assert "syntax error" in str(info.value)

    @pytest.mark.parametrize("text", [
        "[qq]", ">= [qq]", "[qq] >= >= [qq]", "H(A [qq] >= 0", "I(A) [qq] >= 0",
        "I(A;B [qq] >= 0", "2 >= [qq]", "<> >= [qq]", "[qq] + >= 0", "H() [qq] >= 0",
        "Q() [q->q] >= 0", "(1 [qq] >= 0", "[qq] >= 0 0", "[q-q] >= 0",
    ])
    def test_malformed_corpus(self, text):
        with pytest.raises(RIParseError) as info:
            parse(text)
        assert 0 <= info.value.offset <= len(text.encode("utf-8"))

    def test_repeated_label_rejected(self):
        with pytest.raises(RIParseError):
            parse("H(AA) [qq] >= 0")

    def test_parse_file_reports_line(self, tmp_path):
        path = tmp_path / "bad.ri"
        path.write_text("# comment\n[qq] >= 0\n\n[qq >= 0\n", encoding="utf-8")
        with pytest.raises(RIParseError) as info:
            parse_file(path)
        assert info.value.line == 4

    def test_parse_file_skips_comments(self, tmp_path):
        path = tmp_path / "ok.ri"
        path.write_text(f"{TELEPORTATION}  # teleport\n\n{SUPERDENSE_CODING}\n", encoding="utf-8")
        assert [to_text(r) for r in parse_file(path)] == [
            to_text(parse(TELEPORTATION)), to_text(parse(SUPERDENSE_CODING))]


class TestEvaluation:
    def test_merging_on_bell_purification(self):
        psi = purify(bell_state())
        ev = evaluate(parse(STATE_MERGING), psi)
        assert ev.lhs["[qq]"] == pytest.approx(-1.0, abs=1e-9)
        assert ev.lhs["[c->c]"] == pytest.approx(0.0, abs=1e-9)

    def test_bindings_rename_labels(self):
        state = bell_state(("X", "Y"))
        assert evaluate_expr(parse_expr("H(A|B)"), state, {"A": "X", "B": "Y"}) == pytest.approx(-1.0, abs=1e-9)

    def test_unknown_label(self):
        with pytest.raises(RIEvaluationError):
            evaluate_expr(parse_expr("H(Z)"), bell_state())

    def test_symbolic_coefficients_do_not_evaluate(self):
        with pytest.raises(RIEvaluationError):
            evaluate(parse(EA_CAPACITY), bell_state())

    def test_arithmetic(self):
        value = evaluate_expr(parse_expr("1/2 (H(A) + 3) - -1"), bell_state())
        assert value == pytest.approx(3.0)

    def test_net_balance(self):
        ev = evaluate(parse(TELEPORTATION), bell_state())
        assert ev.net() == {"[c->c]": 2.0, "[q->q]": -1.0, "[qq]": 1.0}


class TestCalculus:
    def test_scale_folds_constants(self):
        scaled = scale(parse(TELEPORTATION), Const(Fraction(1, 2)))
        assert to_text(scaled) == "[c->c] + 1/2 [qq] >= 1/2 [q->q]"

    def test_scale_rejects_negative(self):
        with pytest.raises(RIEvaluationError):
            scale(parse(TELEPORTATION), Const(Fraction(-1)))

    def test_chain_cancels_shared_resource(self):
        derived = chain(parse(TELEPORTATION), parse(SUPERDENSE_CODING))
        assert to_text(derived) == "2 [c->c] + [qq] + [qq] >= 2 [c->c]"

    def test_chain_requires_shared_resource(self):
        with pytest.raises(ChainError):
            chain(parse(ENTANGLEMENT_DISTRIBUTION), parse(SCHUMACHER))

    def test_chain_is_associative_on_net_balance(self):
        a, b, c = parse(TELEPORTATION), parse(ENTANGLEMENT_DISTRIBUTION), parse(TELEPORTATION)
        left = chain(chain(a, b), c)
        right = chain(a, chain(b, c))
        state = bell_state()
        assert evaluate(left, state).net() == evaluate(right, state).net()

    def test_cancel_across_sides(self):
        ri = cancel(parse("2 [c->c] + [qq] + [qq] >= 2 [c->c]"))
        assert to_text(ri) == "[qq] + [qq] >= 0"

    def test_derive_needs_steps(self):
        with pytest.raises(ChainError):
            derive([])

    def test_resolve_library_names(self):
        assert resolve("fqsw") == parse(LIBRARY["fqsw"])
        assert resolve("[qq] >= 0") == parse("[qq] >= 0")


class TestCertificates:
    def test_merging_from_fqsw_and_teleportation(self):
        steps = [scale(parse(TELEPORTATION), parse_expr("1/2 I(A;R)_psi")), parse(FQSW)]
        report = certify(parse(STATE_MERGING), steps, merging_samples())
        assert report.passed
        assert len(report.samples) == 50
        assert report.max_residual <= 1e-8
        assert report.excluded == ["[c->c]"]
        assert report.to_dict()["verdict"] == "PASS"

    def test_corrupted_scale_fails(self):
        steps = [scale(parse(TELEPORTATION), parse_expr("0.4 I(A;R)_psi")), parse(FQSW)]
        report = certify(parse(STATE_MERGING), steps, merging_samples())
        assert not report.passed
        assert report.max_residual > 1e-2
        assert report.to_dict()["verdict"] == "FAIL"

    def test_counting_classical_bits(self):
        steps = [parse(TELEPORTATION), parse(SUPERDENSE_CODING)]
        report = certify(parse("[qq] + [qq] >= 0"), steps, [bell_state()], free_classical=False)
        assert report.passed
        assert report.excluded == []

    def test_parallel_matches_serial(self):
        steps = [scale(parse(TELEPORTATION), parse_expr("1/2 I(A;R)_psi")), parse(FQSW)]
        states = merging_samples(8)
        serial = certify(parse(STATE_MERGING), steps, states).to_dict()
        parallel = certify(parse(STATE_MERGING), steps, states, workers=4).to_dict()
        assert serial == parallel
