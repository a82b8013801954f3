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

#include "fastcharge/harness/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace fastcharge::harness {

nlohmann::json checkpoint_json(Mode mode, const td3::Agent& agent,
                               const std::optional<safety::StaticSafety>& safety) {
  nlohmann::json j = {{"mode", to_string(mode)}, {"agent", agent.to_json()}};
  if (safety) j["safety"] = safety->to_json();
  return j;
}

void save_checkpoint(const std::filesystem::path& file, Mode mode, const td3::Agent& agent,
                     const std::optional<safety::StaticSafety>& safety) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write checkpoint " + file.string());
  out << checkpoint_json(mode, agent, safety).dump();
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read checkpoint " + file.string());
  try {
    const auto j = nlohmann::json::parse(in);
    Checkpoint c{mode_from_string(j.at("mode").get<std::string>()), td3::Agent::from_json(j.at("agent")),
                 std::nullopt};
    if (j.contains("safety")) c.safety = safety::StaticSafety::from_json(j.at("safety"));
    if (c.mode != Mode::Plain && !c.safety) throw std::runtime_error("safe checkpoint without surrogates");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed checkpoint " + file.string() + ": " + e.what());
  }
}

}  // namespace fastcharge::harness
