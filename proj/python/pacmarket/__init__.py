# Copyright 2026 The pacmarket Authors.
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

"""Learning market equilibria for Fisher markets with indivisible goods."""

from ._core import (
    DataError,
    Market,
    Outcome,
    ResourceLimitError,
    SampleSet,
    UndefinedError,
    direct_additive,
    direct_submod,
    direct_ud,
    divisible_additive_equilibrium,
    empirical_loss,
    expected_loss,
    indirect_ud,
    is_envy_free,
    is_walrasian,
    learn_desired_sets,
    opt_welfare,
    optimal_ud_equilibrium,
    run_experiment,
    sample_complexity,
    sm_equilibrium,
    welfare,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
