from pathlib import Path
from typing import Any, Dict, cast

import pydantic
import pytest
import toml
from pytest_mock import MockFixture

from hypertrig import app_config
from hypertrig.config import DEFAULT_TOLERANCES, V1, Tolerances


def load_config_fixture(fixture_name: str) -> Path:
    return Path(__file__).parent / "test" / "fixtures" / "config" / fixture_name


def test_config_default() -> None:
    file_path = load_config_fixture("v1-default.toml")
    loaded = toml.load(file_path)
    actual = V1.parse_obj(cast(Dict[Any, Any], loaded))
    expected = V1(version=1)

    assert actual == expected
    assert actual.tolerance == DEFAULT_TOLERANCES


def test_config_loose() -> None:
    actual = V1.parse_toml(load_config_fixture("v1-loose.toml").read_text())
    assert actual == V1(
        version=1, tolerance=Tolerances(rtol=1e-6, reconstruction=1e-4)
    )


def test_config_schema() -> None:
    schema = V1.schema()
    assert set(schema["properties"]) == {"version", "tolerance"}
    assert schema["required"] == ["version"]
    assert set(schema["definitions"]["Tolerances"]["properties"]) == {
        "atol",
        "rtol",
        "recovery",
        "reconstruction",
    }


def test_bad_file() -> None:
    res = V1.parse_toml("something[invalid[")
    assert isinstance(res, toml.TomlDecodeError)

    # we should return an error when we try to parse a different version
    res = V1.parse_toml("version = 20")
    assert isinstance(res, pydantic.ValidationError)

    # the version is required even though every tolerance has a default
    res = V1.parse_toml("")
    assert isinstance(res, pydantic.ValidationError)

    res = V1.parse_toml("version = 1\n[tolerance]\nrtol = 'loose'")
    assert isinstance(res, pydantic.ValidationError)

    res = V1.parse_toml(load_config_fixture("v1-negative.toml").read_text())
    assert isinstance(res, pydantic.ValidationError)


def test_tolerances_are_immutable() -> None:
    with pytest.raises(TypeError):
        DEFAULT_TOLERANCES.rtol = 1e-3  # type: ignore[misc]


def test_with_rtol() -> None:
    relaxed = DEFAULT_TOLERANCES.with_rtol(1e-4)
    assert relaxed.rtol == 1e-4
    assert relaxed.atol == DEFAULT_TOLERANCES.atol
    assert relaxed.recovery == DEFAULT_TOLERANCES.recovery
    with pytest.raises(pydantic.ValidationError):
        DEFAULT_TOLERANCES.with_rtol(0.0)


def test_load_tolerances(mocker: MockFixture) -> None:
    mocker.patch("hypertrig.app_config.HYPERTRIG_CONFIG", None)
    assert app_config.load_tolerances() == DEFAULT_TOLERANCES

    loose = str(load_config_fixture("v1-loose.toml"))
    assert app_config.load_tolerances(loose).rtol == 1e-6

    mocker.patch("hypertrig.app_config.HYPERTRIG_CONFIG", loose)
    assert app_config.load_tolerances().reconstruction == 1e-4


def test_load_tolerances_invalid() -> None:
    path = str(load_config_fixture("v1-negative.toml"))
    with pytest.raises(app_config.InvalidConfigFile) as excinfo:
        app_config.load_tolerances(path)
    assert excinfo.value.path == path
    assert "atol" in excinfo.value.report
