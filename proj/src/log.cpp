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

#include "msraw/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace msraw {
namespace {

LogLevel parse_level(const char* s) {
    if (s == nullptr) return LogLevel::warn;
    const std::string v(s);
    if (v == "error") return LogLevel::error;
    if (v == "warn") return LogLevel::warn;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    std::cerr << "msraw warn: unknown MSRAW_LOG value \"" << v << "\", using \"warn\"\n";
    return LogLevel::warn;
}

const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "?";
}

std::mutex& log_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level(std::getenv("MSRAW_LOG"));
    return level;
}

void log_message(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    const std::lock_guard<std::mutex> lock(log_mutex());
    std::cerr << "msraw " << level_name(level) << ": " << message << "\n";
}

}  // namespace msraw
