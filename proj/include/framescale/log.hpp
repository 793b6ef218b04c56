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

#ifndef FRAMESCALE_LOG_HPP_
#define FRAMESCALE_LOG_HPP_

#include <sstream>
#include <string_view>

namespace framescale::log {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold read once from FRAMESCALE_LOG (error|warn|info|debug); default warn.
Level threshold();
void set_threshold(Level level);
bool enabled(Level level);
void write(Level level, std::string_view message);

template <typename... Args>
void message(Level level, const Args&... args) {
  if (!enabled(level)) return;
  std::ostringstream os;
  (os << ... << args);
  write(level, os.str());
}

template <typename... Args>
void info(const Args&... args) { message(Level::kInfo, args...); }
template <typename... Args>
void debug(const Args&... args) { message(Level::kDebug, args...); }
template <typename... Args>
void warn(const Args&... args) { message(Level::kWarn, args...); }

}  // namespace framescale::log

#endif  // FRAMESCALE_LOG_HPP_
