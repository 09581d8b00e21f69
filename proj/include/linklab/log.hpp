#pragma once

#include <spdlog/spdlog.h>

namespace linklab {

/// Library logger; writes to stderr so stdout stays machine-readable.
spdlog::logger& logger();

inline void log_debug(std::string_view m) { logger().debug(m); }
inline void log_info(std::string_view m) { logger().info(m); }
inline void log_warn(std::string_view m) { logger().warn(m); }

}  // namespace linklab
