"""Tests for instance file reading and writing"""

import json
from fractions import Fraction

import pytest


@pytest.mark.unit
class TestInstanceSchema:
    """Test suite for the instance JSON schema"""

    def test_schema_file_exists(self, instance_schema_file):
        """Verify instance.schema.json exists and is valid JSON"""
        assert instance_schema_file.exists(), f"Schema file not found: {instance_schema_file}"
        with open(instance_schema_file, 'r') as f:
            schema = json.load(f)
        assert set(schema["required"]) == {"rewards", "transitions"}

    def test_missing_transitions(self):
        """Verify a missing required key is reported with InstanceFormatError"""
        from blackwell_mdp.errors import InstanceFormatError
        from blackwell_mdp.model.instance_io import parse_instance
        with pytest.raises(InstanceFormatError):
            parse_instance({"rewards": [["1"]]})

    def test_wrong_scalar_type(self):
        """Verify booleans are not accepted as rationals"""
        from blackwell_mdp.errors import InstanceFormatError
        from blackwell_mdp.model.instance_io import parse_instance
        with pytest.raises(InstanceFormatError):
            parse_instance({"rewards": [[True]], "transitions": [[["1"]]]})

    def test_unknown_norm(self, two_state_raw):
        """Verify the uncertainty norm is restricted to l1 and linf"""
        from blackwell_mdp.errors import InstanceFormatError
        from blackwell_mdp.model.instance_io import parse_instance
        raw = dict(two_state_raw, uncertainty={"norm": "l2", "radii": [["0", "0"], ["0", "0"]]})
        with pytest.raises(InstanceFormatError):
            parse_instance(raw)

    def test_missing_schema(self, tmp_path, two_state_raw):
        """Verify an absent schema file raises InstanceParseError"""
        from blackwell_mdp.errors import InstanceParseError
        from blackwell_mdp.model.instance_io import parse_instance
        with pytest.raises(InstanceParseError, match="not found"):
            parse_instance(two_state_raw, schema_path=tmp_path / "absent.json")

    def test_corrupt_schema(self, tmp_path, two_state_raw):
        """Verify an undecodable schema file raises InstanceParseError"""
        from blackwell_mdp.errors import InstanceParseError
        from blackwell_mdp.model.instance_io import parse_instance
        path = tmp_path / "schema.json"
        path.write_text("{\"type\": ")
        with pytest.raises(InstanceParseError, match="Invalid instance schema"):
            parse_instance(two_state_raw, schema_path=path)


@pytest.mark.unit
class TestParseInstance:
    """Test suite for parse_instance"""

    def test_nominal(self, two_state_raw):
        """Verify a file without an uncertainty block has no uncertainty set"""
        from blackwell_mdp.model.instance_io import parse_instance
        mdp, uncertainty = parse_instance(two_state_raw)
        assert uncertainty is None
        assert mdp.m == 2
        assert mdp.rewards[0][0] == Fraction(1, 2)

    def test_floats_rejected_by_default(self, two_state_raw):
        """Verify binary floats need rationalize_floats"""
        from blackwell_mdp.errors import FloatInputRejected
        from blackwell_mdp.model.instance_io import parse_instance
        raw = dict(two_state_raw, rewards=[[0.5, 0], [1, 1]])
        with pytest.raises(FloatInputRejected):
            parse_instance(raw)
        mdp, _ = parse_instance(raw, rationalize=True)
        assert mdp.rewards[0][0] == Fraction(1, 2)

    def test_radii_join_common_denominator(self, two_state_raw):
        """Verify radius denominators contribute to m"""
        from blackwell_mdp.core.robust import Norm
        from blackwell_mdp.model.instance_io import parse_instance
        raw = dict(two_state_raw, uncertainty={"norm": "l1", "radii": [["1/3", "0"], ["0", "0"]]})
        mdp, uncertainty = parse_instance(raw)
        assert mdp.m == 6
        assert uncertainty.norm == Norm.L1
        assert uncertainty.radii[0][0] == Fraction(1, 3)


@pytest.mark.unit
class TestLoadAndWrite:
    """Test suite for load_instance and write_instance"""

    def test_missing_file(self, tmp_path):
        """Verify an unreadable file raises InstanceParseError"""
        from blackwell_mdp.errors import InstanceParseError
        from blackwell_mdp.model.instance_io import load_instance
        with pytest.raises(InstanceParseError):
            load_instance(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        """Verify malformed JSON raises InstanceParseError"""
        from blackwell_mdp.errors import InstanceParseError
        from blackwell_mdp.model.instance_io import load_instance
        path = tmp_path / "broken.json"
        path.write_text("{\"rewards\": [")
        with pytest.raises(InstanceParseError):
            load_instance(path)

    def test_reload_preserves_instance(self, example_one, example_one_file):
        """Verify a written instance loads back unchanged, labels included"""
        from blackwell_mdp.model.instance_io import load_instance
        mdp, uncertainty = load_instance(example_one_file)
        assert uncertainty is None
        assert mdp == example_one
        assert mdp.action_labels == ("a1", "a2", "a3")

    def test_writes_are_byte_identical(self, tmp_path, example_two):
        """Verify identical instances serialize to identical bytes"""
        from blackwell_mdp.model.instance_io import instance_digest, write_instance
        first = write_instance(tmp_path / "a.json", example_two).read_bytes()
        second = write_instance(tmp_path / "b" / "a.json", example_two).read_bytes()
        assert first == second
        assert first.endswith(b"\n")
        assert len(instance_digest(example_two)) == 64

    def test_rationals_written_as_strings(self, two_state):
        """Verify every rational is written as num/den"""
        from blackwell_mdp.model.instance_io import dump_instance
        data = dump_instance(two_state)
        assert data["rewards"] == [["1/2", "0/1"], ["1/1", "1/1"]]
        assert data["m"] == 2
        assert "uncertainty" not in data

    def test_uncertainty_round_trip(self, tmp_path, two_state):
        """Verify the uncertainty block survives a write and reload"""
        from blackwell_mdp.core.robust import validate_uncertainty
        from blackwell_mdp.model.instance_io import load_instance, write_instance
        u = validate_uncertainty(two_state, {"norm": "linf", "radii": [["0", "1/2"], ["1/2", "0"]]})
        path = write_instance(tmp_path / "robust.json", two_state, u)
        mdp, loaded = load_instance(path)
        assert mdp == two_state
        assert loaded == u
