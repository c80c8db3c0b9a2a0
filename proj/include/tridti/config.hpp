//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// JSON form of ModelConfig. Keys are the struct field names; unknown keys,
// wrong types and out-of-range values raise UsageError.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tridti/model.hpp"

namespace tridti {

std::vector<std::string> config_keys();

// Sets one field from its JSON text ("0.2", "4", ...).
void set_config_value(ModelConfig &config, std::string_view key,
                      std::string_view json_value);
std::string get_config_value(const ModelConfig &config, std::string_view key);

// Starts from `base` and overrides the keys present in the document.
ModelConfig config_from_json(std::string_view text,
                             const ModelConfig &base = {});
std::string config_to_json(const ModelConfig &config);
ModelConfig load_config(const std::filesystem::path &path,
                        const ModelConfig &base = {});

// Small widths and few epochs: runs the full pipeline on a laptop CPU in
// seconds to minutes.
ModelConfig desk_config();

} // namespace tridti
