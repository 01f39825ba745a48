import json
from typing import Union

import pydantic
import toml


def get_report_for_invalid_config(
    error: Union[pydantic.ValidationError, toml.TomlDecodeError],
    config_str: str,
    path: str,
) -> str:
    if isinstance(error, pydantic.ValidationError):
        error_text = f"# pretty \n{error}\n\n\n# json \n{error.json()}"
    else:
        error_text = repr(error)
    line_count = config_str.count("\n") + 1
    return f"""\
invalid hypertrig configuration file

## configuration file
> path: {path}
> line count: {line_count}

{config_str}

## configuration error message
{error_text}

## notes
- the file must contain `version = 1`
- tolerances live in a [tolerance] table with keys atol, rtol, recovery and reconstruction
"""


def get_report_for_invalid_document(
    error: Union[pydantic.ValidationError, json.JSONDecodeError],
    kind: str,
    path: str,
) -> str:
    if isinstance(error, pydantic.ValidationError):
        error_text = str(error)
    else:
        error_text = repr(error)
    return f"invalid {kind} in {path}\n{error_text}\n"
