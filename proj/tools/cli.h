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

#ifndef XREF_TOOLS_CLI_H_
#define XREF_TOOLS_CLI_H_

namespace xref::cli {

// Exit status: 0 on success, 1 on validation or runtime failure, 2 on
// usage errors.
int Run(int argc, char** argv);

}  // namespace xref::cli

#endif  // XREF_TOOLS_CLI_H_
