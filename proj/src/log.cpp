// Copyright 2026 The Framescale Authors.
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

#include "framescale/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace framescale::log {
namespace {

Level parse_env() {
  const char* raw = std::getenv("FRAMESCALE_LOG");
  if (raw == nullptr) return Level::kWarn;
  const std::string value(raw);
  if (value == "error") return Level::kError;
  if (value == "info") return Level::kInfo;
  if (value == "debug") return Level::kDebug;
  return Level::kWarn;
}

std::atomic<int>& threshold_storage() {
  static std::atomic<int> level{static_cast<int>(parse_env())};
  return level;
}

const char* tag(Level level) {
  switch (level) {
    case Level::kError: return "error";
    case Level::kWarn: return "warn";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() { return static_cast<Level>(threshold_storage().load()); }

void set_threshold(Level level) {
  threshold_storage().store(static_cast<int>(level));
}

bool enabled(Level level) {
  return static_cast<int>(level) <= threshold_storage().load();
}

void write(Level level, std::string_view message) {
  static std::mutex mu;
  const std::lock_guard<std::mutex> lock(mu);
  std::clog << "[framescale " << tag(level) << "] " << message << '\n';
}

}  // namespace framescale::log
