// Copyright (c) 2026 The msraw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace msraw {

// Self-verification of the consistency-loss kernels: brute-force pair
// enumeration oracles, central finite-difference gradient checks, gradient
// reversal contract, and the invariance properties. Backs the `loss-check`
// CLI subcommand; the oracles here are written independently of the kernel
// implementations.

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckLine> lines;

    bool all_pass() const;
    std::string to_string() const;  // one "PASS/FAIL name: detail" line each
};

CheckReport run_consistency_checks(std::uint64_t seed, int trials);

}  // namespace msraw
