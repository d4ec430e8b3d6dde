# Copyright 2026 The hamxform Authors
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

"""Frame transformations of time-dependent Hamiltonians."""

import json

from ._core import (
    ConfigError,
    __version__,
    analytic_nmr_propagator,
    analytic_slow_propagator,
    embed,
    experiment_kinds,
    fast_counterpart_equivalence,
    fidelity,
    grover_aqc_run,
    herm_expm,
    nmr_fidelity_floor,
    nmr_ground_fidelity,
    nmr_hamiltonian,
    nmr_hidden_adiabaticity,
    phase_aligned_distance,
    problem_matrix,
    propagate_nmr,
    rotating_frame_hamiltonian,
    run_experiment_json,
)


def run_experiment(config, overrides=()):
    """Runs an experiment config (dict or JSON text) and returns the result record."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(run_experiment_json(text, list(overrides)))


__all__ = [
    "ConfigError",
    "__version__",
    "analytic_nmr_propagator",
    "analytic_slow_propagator",
    "embed",
    "experiment_kinds",
    "fast_counterpart_equivalence",
    "fidelity",
    "grover_aqc_run",
    "herm_expm",
    "nmr_fidelity_floor",
    "nmr_ground_fidelity",
    "nmr_hamiltonian",
    "nmr_hidden_adiabaticity",
    "phase_aligned_distance",
    "problem_matrix",
    "propagate_nmr",
    "rotating_frame_hamiltonian",
    "run_experiment",
]
