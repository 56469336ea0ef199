# Copyright 2026 The Soundmatch Authors.
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

"""Differentiable iterative sound matching."""

from soundmatch._core import (
    DEFAULT_MASTER_SEED,
    SAMPLE_RATE,
    SIGNAL_LENGTH,
    ConfigError,
    denormalize,
    encode_wav,
    kruskal_wallis,
    loss,
    loss_and_grad,
    losses,
    mss,
    npsk_rank,
    programs,
    render,
    run_trial,
    spearman,
    sweep,
)

__all__ = [
    "DEFAULT_MASTER_SEED",
    "SAMPLE_RATE",
    "SIGNAL_LENGTH",
    "ConfigError",
    "denormalize",
    "encode_wav",
    "kruskal_wallis",
    "loss",
    "loss_and_grad",
    "losses",
    "mss",
    "npsk_rank",
    "programs",
    "render",
    "run_trial",
    "spearman",
    "sweep",
]
