# Copyright 2026 The OnOff Privacy Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the ON-OFF privacy toolkit."""

import json

from onoff_privacy._core import (
    converse_min_length,
    empirical_rates,
    oracle_rates,
    rate_curve,
    simulate,
    stationary,
    t_step_prob,
    table_for,
    theoretical_rate,
)

__all__ = [
    "audit",
    "converse_min_length",
    "empirical_rates",
    "oracle_rates",
    "rate_curve",
    "simulate",
    "stationary",
    "t_step_prob",
    "table_for",
    "theoretical_rate",
]


def audit(alpha, beta, mode="step", horizon=None, policy="onoff"):
    """Exact leakage report as a dict.

    `horizon` defaults to 6 steps for the step mode and to the flag count for
    an explicit Y/N mode.
    """
    from onoff_privacy._core import audit_json

    if horizon is None:
        horizon = 6 if mode == "step" else len(mode)
    return json.loads(audit_json(alpha, beta, mode, horizon, policy))
