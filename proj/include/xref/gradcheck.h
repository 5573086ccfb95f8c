// Copyright 2026 The XREF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XREF_GRADCHECK_H_
#define XREF_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "xref/nn.h"

namespace xref {

struct GradCheckCase {
  std::string name;
  GradCheckReport report;
};

// Finite-difference checks of the biLSTM, bilinear attention, dense tanh
// projections, logistic loss and the full linking objective (features on
// and off) on a two-mention batch from a small synthetic corpus.
std::vector<GradCheckCase> RunGradChecks(uint64_t seed);

}  // namespace xref

#endif  // XREF_GRADCHECK_H_
