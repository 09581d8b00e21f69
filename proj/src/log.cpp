#include "linklab/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

namespace linklab {

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_logger_mt("linklab");
    l->set_pattern("[%l] %v");
    return l;
  }();
  return *instance;
}

}  // namespace linklab
