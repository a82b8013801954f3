/* Copyright 2026 The fastcharge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <optional>

#include "fastcharge/harness/trainer.hpp"

namespace fastcharge::harness {

struct Checkpoint {
  Mode mode;
  td3::Agent agent;
  std::optional<safety::StaticSafety> safety;
};

nlohmann::json checkpoint_json(Mode mode, const td3::Agent& agent,
                               const std::optional<safety::StaticSafety>& safety);
void save_checkpoint(const std::filesystem::path& file, Mode mode, const td3::Agent& agent,
                     const std::optional<safety::StaticSafety>& safety);

/// Throws std::runtime_error when the file is missing or malformed.
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace fastcharge::harness
