# Copyright 2026 The funnelkit Authors
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
"""State theory on finite funnels of matrix algebras."""

import json

from ._core import (
    ConfigurationError,
    ContractError,
    ExcitationState,
    FunnelError,
    FunnelTower,
    GenericState,
    StateProfile,
    __version__,
    algebra_product_kernel,
    commensurable,
    demo_text,
    excitation,
    lift_phase,
    norm_distance,
    overlap,
    suite_ids,
    transition_probability,
    uhlmann_fidelity,
    ut_probability,
    vacuum_detector,
    vacuum_excitation,
    verify_json,
)

DEFAULT_CONFIG = {
    "tower_dims": [2, 2, 4],
    "seed": 42,
    "profile": "random_full_rank",
    "suites": [],
    "tolerance_overrides": {},
    "sample_counts": {},
}


def verify(config=None, **overrides):
    """Run verification suites and return the report as a dict."""
    doc = dict(DEFAULT_CONFIG if config is None else config)
    doc.update(overrides)
    return json.loads(verify_json(json.dumps(doc)))
