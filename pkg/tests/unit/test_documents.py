"""
Unit tests for functional, ideal and report documents
"""

import json
from fractions import Fraction

import pytest

from conftest import functional_payload, moments_of, write_document
from symprod.documents import (
    FunctionalDocument,
    RunReport,
    inputs_digest,
    load_functional_document,
    load_ideal,
)
from symprod.polyalg import EXACT, FiniteFunctional, ScalarMode, parse_polynomial
from symprod.polyalg.scalar import GaussianRational
from symprod.utils.errors import ParseError, ValidationError


def load(path, context):
    return load_functional_document(path).to_functional(context)


def moments_payload(num_vars, degree_bound, entries):
    return {
        "kind": "moments",
        "moments": {
            "num_vars": num_vars,
            "degree_bound": degree_bound,
            "entries": [{"exponents": e, "value": v} for e, v in entries],
        },
    }


class TestFunctionalDocument:
    """Loading functionals from JSON"""

    def test_finite(self, tmp_path):
        path = write_document(
            tmp_path / "f.json",
            {"kind": "finite", "finite": {"labels": ["a", "b"], "values": [2, "1/2"]}},
        )

        f = load(path, EXACT)

        assert isinstance(f, FiniteFunctional)
        assert f.values == (2, GaussianRational(Fraction(1, 2)))

    def test_moments(self, tmp_path):
        payload = moments_payload(1, 2, [([0], 2), ([1], 3), ([2], {"re": 5, "im": 0})])
        f = load(write_document(tmp_path / "m.json", payload), EXACT)

        assert [f.moment((k,)) for k in range(3)] == [2, 3, 5]

    def test_payload_helper_reloads(self, tmp_path, two_points):
        path = write_document(tmp_path / "m.json", functional_payload(two_points))

        assert load(path, EXACT) == two_points

    def test_incomplete_table(self, tmp_path):
        payload = moments_payload(1, 2, [([0], 2), ([1], 3)])

        with pytest.raises(ValidationError, match="incomplete"):
            load(write_document(tmp_path / "m.json", payload), EXACT)

    def test_duplicate_entry(self, tmp_path):
        payload = moments_payload(1, 1, [([0], 2), ([1], 3), ([1], 4)])

        with pytest.raises(ValidationError, match="Duplicate"):
            load(write_document(tmp_path / "m.json", payload), EXACT)

    def test_sections_must_match_kind(self, tmp_path):
        payload = moments_payload(1, 0, [([0], 1)])
        payload["kind"] = "finite"

        with pytest.raises(ValidationError):
            load_functional_document(write_document(tmp_path / "bad.json", payload))

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(ValidationError):
            load_functional_document(
                write_document(tmp_path / "bad.json", {"kind": "graph"})
            )

    def test_label_count_mismatch(self, tmp_path):
        payload = {"kind": "finite", "finite": {"labels": ["a", "b"], "values": [1]}}

        with pytest.raises(ValidationError):
            load_functional_document(write_document(tmp_path / "bad.json", payload))

    def test_negative_exponent(self, tmp_path):
        payload = moments_payload(1, 1, [([0], 1), ([-1], 1)])

        with pytest.raises(ValidationError):
            load_functional_document(write_document(tmp_path / "bad.json", payload))

    def test_floats_need_float_mode(self, tmp_path, floating):
        payload = {"kind": "finite", "finite": {"labels": ["a"], "values": [1.5]}}
        path = write_document(tmp_path / "f.json", payload)

        with pytest.raises(ValidationError):
            load(path, EXACT)
        f = load(path, floating)
        assert floating.close(f.unit_value, floating.coerce(Fraction(3, 2)))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"kind": "finite",\n "finite": }', encoding="utf-8")

        with pytest.raises(ParseError) as info:
            load_functional_document(str(path))

        assert info.value.line == 2
        assert info.value.exit_code == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError):
            load_functional_document(str(tmp_path / "nope.json"))

    @pytest.mark.parametrize("literal", ["NaN", "Infinity", "-Infinity"])
    def test_non_finite_literals_rejected(self, tmp_path, literal):
        path = tmp_path / "f.json"
        path.write_text(
            '{"kind": "finite", "finite": {"labels": ["a"], "values": [%s]}}' % literal,
            encoding="utf-8",
        )

        with pytest.raises(ValidationError, match="Non-finite"):
            load_functional_document(str(path))

    def test_overflowing_float_rejected(self, tmp_path):
        path = tmp_path / "f.json"
        path.write_text(
            '{"kind": "finite", "finite": {"labels": ["a"], "values": [1e999]}}',
            encoding="utf-8",
        )

        with pytest.raises(ValidationError):
            load_functional_document(str(path))

    def test_from_functional_orders_entries(self):
        f = moments_of([((1, 2), 1)], 1)

        document = FunctionalDocument.from_functional(f)

        assert [e.exponents for e in document.moments.entries] == [[0, 0], [0, 1], [1, 0]]


class TestIdealDocument:
    """Ideal generators"""

    def test_load(self, tmp_path):
        path = write_document(
            tmp_path / "ideal.json", {"num_vars": 2, "generators": ["u1^2 - u2"]}
        )

        assert load_ideal(path, EXACT) == [parse_polynomial("u1^2 - u2", 2)]

    def test_parse_error(self, tmp_path):
        path = write_document(
            tmp_path / "ideal.json", {"num_vars": 2, "generators": ["u1^^2"]}
        )

        with pytest.raises(ParseError):
            load_ideal(path, EXACT)


class TestRunReport:
    """Report serialization"""

    def test_sorted_and_compact(self):
        report = RunReport(
            command="phi",
            inputs_digest="abc",
            outputs={"b": 1, "a": 2},
            scalar_mode=ScalarMode.EXACT,
            tolerances={"vanishing": 1e-20},
        )

        text = report.to_json()

        assert "timing" not in json.loads(text)
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text)["scalar_mode"] == "exact"

    def test_digest_is_canonical(self):
        assert inputs_digest({"a": 1, "b": [1, 2]}) == inputs_digest({"b": [1, 2], "a": 1})
        assert inputs_digest({"a": 1}) != inputs_digest({"a": 2})
