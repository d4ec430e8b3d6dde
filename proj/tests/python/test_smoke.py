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

import math

import numpy as np
import pytest

import hamxform


def test_embed_places_qubit_zero_first():
    z = np.diag([1.0, -1.0])
    expected = np.kron(z, np.eye(2))
    np.testing.assert_allclose(hamxform.embed("Z0", 2), expected)
    assert hamxform.embed("", 3).shape == (8, 8)


def test_herm_expm_matches_rotation():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    theta = 0.3
    expected = math.cos(theta) * np.eye(2) - 1j * math.sin(theta) * x
    np.testing.assert_allclose(hamxform.herm_expm(x, theta), expected, atol=1e-14)


def test_numeric_propagator_matches_closed_form():
    u = hamxform.propagate_nmr(1.0, 1.5, 2.0, 10.0, 10000)
    exact = hamxform.analytic_nmr_propagator(1.0, 1.5, 2.0, 10.0)
    assert hamxform.phase_aligned_distance(u, exact) <= 1e-5


def test_hidden_adiabaticity():
    report = hamxform.nmr_hidden_adiabaticity(1.0, 2.0, 25.0, math.pi / 2, 1571)
    assert report["min_fidelity"] >= 0.999
    assert report["correction_gate_distance"] <= 1e-8
    assert abs(hamxform.nmr_fidelity_floor(25.0, 1.0) - 0.99960016) < 1e-8


def test_grover_problem_and_run():
    np.testing.assert_allclose(np.diag(hamxform.problem_matrix("grover", 2, 3)).real, [1, 1, 1, 0])
    frozen = hamxform.grover_aqc_run(2, 3, 2.0, 1e-6, 2, initial="minus")
    assert abs(frozen["final_fidelity_vs_marked"] - 0.25) < 1e-6


def test_fast_counterpart():
    report = hamxform.fast_counterpart_equivalence("grover", 2, 1, 2.0, 4.0, 2000)
    assert report["fidelity_composed"] >= 1 - 1e-12
    assert report["fidelity_closed_form"] >= 1 - 1e-6


def test_run_experiment_record():
    record = hamxform.run_experiment({"experiment": "verify-transform", "pair": "self"}, ["n_steps=100", "t_end=1"])
    assert record["pass"]
    assert record["metrics"]["max_residual"] <= 1e-12
    assert set(hamxform.experiment_kinds()) == {"nmr", "grover", "ising", "verify-transform", "rescale"}


def test_config_errors_raise():
    with pytest.raises(ValueError, match="n_steps"):
        hamxform.run_experiment({"experiment": "grover", "n_steps": -1})
