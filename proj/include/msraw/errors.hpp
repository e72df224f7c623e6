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

#include <stdexcept>
#include <string>

namespace msraw {

// Array/image dimensions do not match what an operation requires.
struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

// A configuration document (profile, generation config, CLI combination) is invalid.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A sensor profile yields physically impossible values (e.g. negative variance).
struct calibration_error : std::runtime_error {
    explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

// A matrix that must be inverted is singular (or numerically indistinguishable from it).
struct invertibility_error : std::runtime_error {
    explicit invertibility_error(const std::string& what) : std::runtime_error(what) {}
};

// A file is not in the expected on-disk format.
struct format_error : std::runtime_error {
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace msraw
