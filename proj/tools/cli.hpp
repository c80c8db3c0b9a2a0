//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tridti::cli {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kTraining = 4 };

// Runs one command. args[0] is the program name. Errors print a single
// line "tridti: error kind=<kind> code=<n> message=<json string>" to err.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace tridti::cli
