// Copyright 2026 The Shotcap Authors.
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


#ifndef SHOTCAP_CLI_H_
#define SHOTCAP_CLI_H_

#include <iosfwd>

#include "shotcap/error.h"

namespace shotcap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // bad input, usage, alignment
inline constexpr int kExitIo = 2;          // file system or backend failure

int ExitCodeFor(ErrorKind kind);

// Runs the command line in-process. Normal output goes to `out`, diagnostics
// and usage errors to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shotcap::cli

#endif  // SHOTCAP_CLI_H_
