// Copyright 2026 The Perturbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERTURBENCH_EDITS_H_
#define PERTURBENCH_EDITS_H_

#include <string>
#include <vector>

#include "perturbench/textcore.h"

namespace perturbench::metrics {

// A span edit over source tokens: tokens [span.begin, span.end) are replaced
// by `correction` (space-separated tokens, empty for a deletion).
struct Edit {
  text::Span span;
  std::string correction;

  friend bool operator==(const Edit&, const Edit&) = default;
  friend auto operator<=>(const Edit&, const Edit&) = default;
};

// Sorted by span, non-overlapping.
struct EditSet {
  std::vector<Edit> edits;

  std::size_t size() const { return edits.size(); }
  bool empty() const { return edits.empty(); }
  friend bool operator==(const EditSet&, const EditSet&) = default;
};

}  // namespace perturbench::metrics

#endif  // PERTURBENCH_EDITS_H_
