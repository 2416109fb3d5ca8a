// Copyright 2026 The fairnet Authors.
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

#ifndef FAIRNET_SCENARIO_IO_H_
#define FAIRNET_SCENARIO_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fairnet/network.h"

namespace fairnet {

inline constexpr int kScenarioVersion = 1;

// Raised for malformed scenario text. `line` is 1-based, 0 if unknown.
class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(std::string origin, int line, std::string field,
                     const std::string& message);

  const std::string& origin() const { return origin_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string origin_;
  int line_;
  std::string field_;
};

// Parses a YAML scenario document (scenario_version: 1). Unknown keys are
// rejected. The result is not validated beyond what parsing needs; call
// ValidateNetwork on it.
Network ParseScenario(std::string_view text, std::string_view origin = "<string>");

Network LoadScenario(const std::filesystem::path& path);

// Inverse of ParseScenario. `comment` is emitted as a leading '#' block.
std::string SerializeScenario(const Network& net, std::string_view comment = "");

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace fairnet

#endif  // FAIRNET_SCENARIO_IO_H_
