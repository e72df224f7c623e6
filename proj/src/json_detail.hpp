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

// Internal helpers shared by io.cpp and dataset.cpp. Not installed.

#pragma once

#include <string>

#include <json.hpp>

#include "msraw/synthesis.hpp"

namespace msraw::detail {

nlohmann::ordered_json meta_record_to_ordered_json(const MetaRecord& record);
MetaRecord meta_record_from_ordered_json(const nlohmann::ordered_json& j,
                                         const std::string& origin);

// Field lookup with a config_error naming the document and the key.
const nlohmann::ordered_json& require_field(const nlohmann::ordered_json& j, const char* key,
                                            const std::string& origin);

}  // namespace msraw::detail
