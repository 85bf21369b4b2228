/*
 * Copyright 2026 The mahood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace mahood {

using WarningSink = std::function<void(const std::string&)>;

namespace log_detail {
inline std::mutex& mutex() {
  static std::mutex m;
  return m;
}
inline WarningSink& sink() {
  static WarningSink s = [](const std::string& msg) { std::clog << "warning: " << msg << '\n'; };
  return s;
}
}  // namespace log_detail

/// Replace the warning sink; returns the previous one.
inline WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(log_detail::mutex());
  std::swap(log_detail::sink(), sink);
  return sink;
}

inline void warn(const std::string& msg) {
  std::lock_guard lock(log_detail::mutex());
  if (log_detail::sink()) log_detail::sink()(msg);
}

}  // namespace mahood
