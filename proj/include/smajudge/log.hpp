// Copyright (c) 2026, smajudge contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef SMAJUDGE_LOG_HPP
#define SMAJUDGE_LOG_HPP

#include <atomic>
#include <iostream>
#include <string_view>

namespace smajudge::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

inline std::atomic<Level>& level() {
    static std::atomic<Level> current{Level::quiet};
    return current;
}

inline void set_level(Level l) { level().store(l); }

inline void info(std::string_view message) {
    if (level().load() >= Level::info) std::clog << "[smajudge] " << message << '\n';
}

inline void debug(std::string_view message) {
    if (level().load() >= Level::debug) std::clog << "[smajudge:debug] " << message << '\n';
}

}  // namespace smajudge::log

#endif  // SMAJUDGE_LOG_HPP
