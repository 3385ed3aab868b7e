"""Tests for working with `LiebiStruct`s."""

from pathlib import Path

import msgspec
import pytest

from liebi.struct import LiebiStruct, format_for_path


class SampleStruct(LiebiStruct):
    """Simple structure for testing `LiebiStruct`s."""

    dim: int
    kappa: list[str]
    name: str


@pytest.mark.parametrize(
    ("format", "expected"),
    [
        ("json", b'{"dim":2,"kappa":["1/2","-3"],"name":"test"}'),
        ("yaml", b"dim: 2\nkappa:\n- 1/2\n- '-3'\nname: test\n"),
    ],
)
def test_encode(format: str, expected: bytes) -> None:
    """Basic test for `encode` method."""
    sample = SampleStruct(name="test", kappa=["1/2", "-3"], dim=2)
    assert sample.encode(format=format) == expected


@pytest.mark.parametrize(
    ("format", "input_bytes"),
    [
        ("json", b'{"dim":2,"kappa":["1/2","-3"],"name":"test"}'),
        ("yaml", b"dim: 2\nkappa:\n- 1/2\n- '-3'\nname: test\n"),
    ],
)
def test_decode(format: str, input_bytes: bytes) -> None:
    """Basic test for `decode` method."""
    sample = SampleStruct.decode(input_bytes, format=format)
    assert sample == SampleStruct(name="test", kappa=["1/2", "-3"], dim=2)


def test_unknown_format() -> None:
    """Only yaml, json and msgpack are supported."""
    sample = SampleStruct(name="test", kappa=[], dim=0)
    with pytest.raises(ValueError, match="Unknown format"):
        sample.encode(format="toml")
    with pytest.raises(ValueError, match="Unknown format"):
        SampleStruct.decode(b"", format="toml")


def test_as_json_obj_basic() -> None:
    """Basic test for `as_json_objects` method."""
    sample = SampleStruct(name="test", kappa=["1/2"], dim=1)
    assert sample.as_json_objects() == {"dim": 1, "kappa": ["1/2"], "name": "test"}


def test_validate_with_valid_input() -> None:
    """Make sure `validate` method accepts valid input."""
    SampleStruct(name="test", kappa=["1/2"], dim=1).validate()


def test_validate_fails_with_invalid_input_after_change() -> None:
    """Make sure `validate` method rejects invalid input."""
    sample = SampleStruct(name="test", kappa=["1/2"], dim=1)
    # It was valid, but let's make it invalid now:
    sample.dim = "not an int"  # type: ignore
    with pytest.raises(msgspec.ValidationError):
        sample.validate()


@pytest.mark.parametrize(
    ("filename", "expected"),
    [
        ("report.json", "json"),
        ("input.yaml", "yaml"),
        ("input.YML", "yaml"),
        ("blob.msgpack", "msgpack"),
        ("no_suffix", "yaml"),
    ],
)
def test_format_for_path(filename: str, expected: str) -> None:
    """Formats are picked by suffix, defaulting to YAML."""
    assert format_for_path(Path(filename)) == expected


@pytest.mark.parametrize("filename", ["sample.json", "sample.yaml", "sample.msgpack"])
def test_file_round_trip(tmp_path: Path, filename: str) -> None:
    """`to_file` and `from_file` agree on every format."""
    sample = SampleStruct(name="test", kappa=["0", "4"], dim=2)
    path = tmp_path / filename
    sample.to_file(path)
    assert SampleStruct.from_file(path) == sample


def test_from_file_rejects_wrong_shape(tmp_path: Path) -> None:
    """Files not matching the struct raise `msgspec.ValidationError`."""
    path = tmp_path / "sample.json"
    path.write_text('{"name": "test", "kappa": [1], "dim": 2}')
    with pytest.raises(msgspec.ValidationError):
        SampleStruct.from_file(path)
