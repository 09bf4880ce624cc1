#include "fluxgap/harness.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>

namespace fluxgap {

void init_logging() {
  auto logger = spdlog::get("fluxgap");
  if (!logger) logger = spdlog::stderr_logger_mt("fluxgap");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("FLUXGAP_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept it when asked for.
    if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
  }
  spdlog::set_level(level);
}

}  // namespace fluxgap
