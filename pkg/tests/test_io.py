import json

import numpy as np
import pytest

from jointmeas.io import (
    FileFormatError,
    format_float,
    load_outcome_map_pairs,
    load_povm,
    load_state,
    save_povm,
    save_state,
    write_csv,
)
from jointmeas.povm import Povm, State, bloch_pvm, noisy_qubit_povm, random_povm


class TestPovmRoundTrip:
    def test_bit_exact_round_trip(self, tmp_path):
        p = random_povm(3, 4, seed=60)
        path = tmp_path / "p.json"
        save_povm(p, path)
        loaded, violations = load_povm(path)
        assert violations == []
        assert loaded.outcomes == p.outcomes
        assert np.array_equal(loaded.elements, p.elements)

    def test_serialization_is_stable(self, tmp_path):
        p = noisy_qubit_povm((0, 0, 1), 1 / 3)
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        save_povm(p, first)
        loaded, _ = load_povm(first)
        save_povm(loaded, second)
        assert first.read_bytes() == second.read_bytes()

    def test_validation_report_attached(self, tmp_path):
        bad = Povm(("a", "b"), np.stack([np.diag([1.1, 0.0]), np.diag([-0.1, 1.0])]))
        path = tmp_path / "bad.json"
        save_povm(bad, path)
        loaded, violations = load_povm(path)
        assert loaded.outcomes == ("a", "b")
        assert any(v.kind == "positivity" for v in violations)


class TestPovmSchemaErrors:
    def test_json_syntax_error_has_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"format_version": "1",')
        with pytest.raises(FileFormatError, match="line"):
            load_povm(path)

    def test_missing_key(self, tmp_path):
        path = tmp_path / "missing.json"
        path.write_text(json.dumps({"format_version": "1", "dim": 2}))
        with pytest.raises(FileFormatError, match="outcomes"):
            load_povm(path)

    def test_wrong_version(self, tmp_path):
        path = tmp_path / "version.json"
        path.write_text(
            json.dumps({"format_version": "2", "dim": 1, "outcomes": ["a"], "elements": {}})
        )
        with pytest.raises(FileFormatError, match="format_version"):
            load_povm(path)

    def test_wrong_entry_count(self, tmp_path):
        path = tmp_path / "short.json"
        doc = {
            "format_version": "1",
            "dim": 2,
            "outcomes": ["a"],
            "elements": {"a": [[1.0, 0.0]]},
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(FileFormatError, match="row-major"):
            load_povm(path)

    def test_elements_must_match_outcomes(self, tmp_path):
        path = tmp_path / "mismatch.json"
        doc = {
            "format_version": "1",
            "dim": 1,
            "outcomes": ["a"],
            "elements": {"b": [[1.0, 0.0]]},
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(FileFormatError, match="outcome labels"):
            load_povm(path)

    def test_nonfinite_rejected(self, tmp_path):
        path = tmp_path / "inf.json"
        doc = {
            "format_version": "1",
            "dim": 1,
            "outcomes": ["a"],
            "elements": {"a": [[1e999, 0.0]]},
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(FileFormatError, match="finite"):
            load_povm(path)


class TestStateFiles:
    def test_round_trip(self, tmp_path):
        s = State.pure([1, 1j])
        path = tmp_path / "s.json"
        save_state(s, path)
        loaded = load_state(path)
        assert np.array_equal(loaded.matrix, s.matrix)


class TestOutcomeMapFiles:
    def test_parse(self, tmp_path):
        path = tmp_path / "map.txt"
        path.write_text("# joint -> A\nf0 +\nf1 -\n\nf2 +\n")
        assert load_outcome_map_pairs(path) == [("f0", "+"), ("f1", "-"), ("f2", "+")]

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "map.txt"
        path.write_text("f0 + extra\n")
        with pytest.raises(FileFormatError, match="line 1"):
            load_outcome_map_pairs(path)

    def test_duplicate_source(self, tmp_path):
        path = tmp_path / "map.txt"
        path.write_text("f0 +\nf0 -\n")
        with pytest.raises(FileFormatError, match="duplicate"):
            load_outcome_map_pairs(path)


class TestCsv:
    def test_fixed_formatting(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv(path, ["a", "b"], [(1 / 3, 2.0), (0.1, 1e-12)])
        text = path.read_text()
        assert text.splitlines()[0] == "a,b"
        assert "0.333333333333" in text
        assert format_float(1 / 3) == "0.333333333333"

    def test_byte_identical_reruns(self, tmp_path):
        rows = [(x / 7, x * x / 13) for x in range(20)]
        p1 = tmp_path / "r1.csv"
        p2 = tmp_path / "r2.csv"
        write_csv(p1, ["x", "y"], rows)
        write_csv(p2, ["x", "y"], rows)
        assert p1.read_bytes() == p2.read_bytes()


def test_emitted_witness_revalidates(tmp_path):
    # save any sharp observable and reload strictly
    p = bloch_pvm((0, 0, 1))
    path = tmp_path / "sharp.json"
    save_povm(p, path)
    _, violations = load_povm(path)
    assert violations == []
