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

#ifndef XREF_LOG_H_
#define XREF_LOG_H_

#include <string_view>

namespace xref {

// Progress and warning messages go to stderr unless disabled.
void SetLogEnabled(bool enabled);
void Log(std::string_view message);

}  // namespace xref

#endif  // XREF_LOG_H_
