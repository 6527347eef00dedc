# Copyright 2026 The semimarkov Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Semi-Markov dynamics and non-Markovianity diagnostics."""

from ._core import (
    DynamicalMap,
    HypoExpWTD,
    NumericalError,
    PauliChannel,
    SpecError,
    blp_measure_dephasing,
    blp_measure_numeric,
    classical_propagator,
    divisibility_signs,
    estimate_generating_function,
    generating_function,
    hou_measure,
    jump_distribution,
    rhp_measure,
)

__version__ = "0.1.0"

__all__ = [
    "DynamicalMap",
    "HypoExpWTD",
    "NumericalError",
    "PauliChannel",
    "SpecError",
    "blp_measure_dephasing",
    "blp_measure_numeric",
    "classical_propagator",
    "divisibility_signs",
    "estimate_generating_function",
    "generating_function",
    "hou_measure",
    "jump_distribution",
    "rhp_measure",
]
