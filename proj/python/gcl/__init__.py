# Copyright 2026 The gcl Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Graph continual learning with coverage-based replay and structure refinement."""

import json
from typing import Any, Mapping

from gcl._gcl import (
    ConfigError,
    DatasetError,
    NumericalError,
    __version__,
    buff_div,
    buffer_quota,
    config_keys,
    corr_div,
    dataset_info,
    default_config,
    dist_from_center,
    fm,
    methods,
    pm,
    select_buffer,
)
from gcl import _gcl

__all__ = [
    "ConfigError",
    "DatasetError",
    "NumericalError",
    "__version__",
    "buff_div",
    "buffer_quota",
    "config",
    "config_keys",
    "corr_div",
    "dataset_info",
    "default_config",
    "dist_from_center",
    "fm",
    "methods",
    "pm",
    "run",
    "select_buffer",
]


def _as_text(values: Mapping[str, Any]) -> dict[str, str]:
    return {key: str(value) for key, value in values.items()}


def config(**overrides: Any) -> dict[str, str]:
    """Returns the validated configuration with ``overrides`` applied."""
    return _gcl.validate_config(_as_text(overrides))


def run(**overrides: Any) -> dict[str, Any]:
    """Runs one experiment and returns its report as a dictionary.

    Keyword arguments are configuration keys, for example
    ``run(dataset="synthetic:cora", method="dslr", seeds=3)``.
    """
    return json.loads(_gcl.run(_as_text(overrides)))
