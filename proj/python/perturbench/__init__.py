# Copyright 2026 The Perturbench Authors
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
"""Python bindings for the perturbench metrics and perturbation core."""

from ._core import (
    Error,
    __version__,
    apply_edits,
    corpus_gleu,
    cosine,
    extract_edits,
    f_beta,
    fleiss_kappa,
    gleu,
    jaccard,
    local_embed,
    perturb,
    tokenize,
)

__all__ = [
    "Error",
    "__version__",
    "apply_edits",
    "corpus_gleu",
    "cosine",
    "extract_edits",
    "f_beta",
    "fleiss_kappa",
    "gleu",
    "jaccard",
    "local_embed",
    "perturb",
    "tokenize",
]
